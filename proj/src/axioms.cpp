#include "portion/axioms.hpp"

#include <json.hpp>

#include <algorithm>

#include "portion/lp.hpp"

namespace portion::axioms {

using nlohmann::json;
using rules::RuleId;

const char* axiom_name(AxiomId a) {
    switch (a) {
        case AxiomId::ParetoOptimality: return "pareto-optimality";
        case AxiomId::RangeRespect: return "range-respect";
        case AxiomId::ScoreUnanimity: return "score-unanimity";
        case AxiomId::ScoreRepresentation: return "score-representation";
        case AxiomId::SingleMindedProportionality: return "single-minded-proportionality";
        case AxiomId::Independence: return "independence";
        case AxiomId::ScoreMonotonicity: return "score-monotonicity";
        case AxiomId::Reinforcement: return "reinforcement";
        case AxiomId::Strategyproofness: return "strategyproofness";
        case AxiomId::Participation: return "participation";
    }
    return "?";
}

std::optional<AxiomId> axiom_from_name(const std::string& name) {
    for (AxiomId a : kAllAxioms)
        if (name == axiom_name(a)) return a;
    return std::nullopt;
}

AxiomArity axiom_arity(AxiomId a) {
    switch (a) {
        case AxiomId::ParetoOptimality:
        case AxiomId::RangeRespect:
        case AxiomId::ScoreUnanimity:
        case AxiomId::ScoreRepresentation:
        case AxiomId::SingleMindedProportionality:
            return AxiomArity::Single;
        case AxiomId::Participation:
            return AxiomArity::Removal;
        default:
            return AxiomArity::Pair;
    }
}

Rational approx_margin() { return pow2_inverse(48); }

namespace {

Rational margin_for(const Outcome& x) {
    return x.is_exact() ? Rational(0) : approx_margin();
}

Rational margin_for(const Outcome& a, const Outcome& b) {
    return (a.is_exact() && b.is_exact()) ? Rational(0) : approx_margin();
}

// Outcomes are compared as rationals; approximate entries are rounded to
// nearby rationals first, harmless under the 2^-48 reporting margin.
std::vector<Rational> entries_of(const Outcome& x) { return x.as_rationals(); }

Witness base_witness(AxiomId axiom, RuleId rule, std::vector<Instance> insts) {
    Witness w;
    w.axiom = axiom;
    w.rule = rule;
    w.instances = std::move(insts);
    return w;
}

CheckResult check_range_respect(RuleId rule, const Instance& inst, const Outcome& x) {
    const Rational margin = margin_for(x);
    auto xs = entries_of(x);
    for (std::size_t j = 0; j < inst.m(); ++j) {
        auto col = inst.column(j);
        Rational lo = *std::min_element(col.begin(), col.end());
        Rational hi = *std::max_element(col.begin(), col.end());
        if (xs[j] < lo - margin) {
            Witness w = base_witness(AxiomId::RangeRespect, rule, {inst});
            w.candidate = j;
            w.relation = ">=";
            w.lhs = xs[j];
            w.rhs = lo;
            w.note = "outcome below the smallest reported score";
            return CheckResult::fail(std::move(w));
        }
        if (xs[j] > hi + margin) {
            Witness w = base_witness(AxiomId::RangeRespect, rule, {inst});
            w.candidate = j;
            w.relation = "<=";
            w.lhs = xs[j];
            w.rhs = hi;
            w.note = "outcome above the largest reported score";
            return CheckResult::fail(std::move(w));
        }
    }
    return CheckResult::ok();
}

CheckResult check_score_unanimity(RuleId rule, const Instance& inst, const Outcome& x) {
    const Rational margin = margin_for(x);
    auto xs = entries_of(x);
    for (std::size_t j = 0; j < inst.m(); ++j) {
        auto col = inst.column(j);
        bool unanimous = std::all_of(col.begin(), col.end(),
                                     [&](const Rational& v) { return v == col.front(); });
        if (!unanimous) continue;
        if (abs(xs[j] - col.front()) > margin) {
            Witness w = base_witness(AxiomId::ScoreUnanimity, rule, {inst});
            w.candidate = j;
            w.relation = "=";
            w.lhs = xs[j];
            w.rhs = col.front();
            w.gamma = col.front();
            return CheckResult::fail(std::move(w));
        }
    }
    return CheckResult::ok();
}

CheckResult check_score_representation(RuleId rule, const Instance& inst, const Outcome& x) {
    const Rational margin = margin_for(x);
    const Rational n(static_cast<long>(inst.n()));
    auto xs = entries_of(x);
    for (std::size_t j = 0; j < inst.m(); ++j) {
        auto col = inst.column(j);
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
        for (const Rational& gamma : col) {
            if (sgn(gamma) == 0) continue;
            Rational required =
                gamma * Rational(static_cast<long>(count_at_least(inst, j, gamma))) / n;
            if (xs[j] < required - margin) {
                Witness w = base_witness(AxiomId::ScoreRepresentation, rule, {inst});
                w.candidate = j;
                w.relation = ">=";
                w.lhs = xs[j];
                w.rhs = required;
                w.gamma = gamma;
                return CheckResult::fail(std::move(w));
            }
        }
    }
    return CheckResult::ok();
}

CheckResult check_single_minded_prop(RuleId rule, const Instance& inst, const Outcome& x) {
    if (!is_single_minded(inst)) return CheckResult::vacuous_pass();
    const Rational margin = margin_for(x);
    const Rational n(static_cast<long>(inst.n()));
    auto xs = entries_of(x);
    for (std::size_t j = 0; j < inst.m(); ++j) {
        Rational required =
            Rational(static_cast<long>(count_at_least(inst, j, Rational(1)))) / n;
        if (abs(xs[j] - required) > margin) {
            Witness w = base_witness(AxiomId::SingleMindedProportionality, rule, {inst});
            w.candidate = j;
            w.relation = "=";
            w.lhs = xs[j];
            w.rhs = required;
            return CheckResult::fail(std::move(w));
        }
    }
    return CheckResult::ok();
}

}  // namespace

CheckResult check_single(AxiomId axiom, RuleId rule, const Instance& inst, const Outcome& x) {
    if (x.size() != inst.m())
        throw Error(ErrorCode::DimensionMismatch, "outcome size differs from candidate count");
    switch (axiom) {
        case AxiomId::RangeRespect: return check_range_respect(rule, inst, x);
        case AxiomId::ScoreUnanimity: return check_score_unanimity(rule, inst, x);
        case AxiomId::ScoreRepresentation: return check_score_representation(rule, inst, x);
        case AxiomId::SingleMindedProportionality: return check_single_minded_prop(rule, inst, x);
        case AxiomId::ParetoOptimality: return check_pareto(rule, inst, x);
        default:
            throw Error(ErrorCode::InvalidArgument, "not a single-instance axiom");
    }
}

CheckResult check_pareto(RuleId rule, const Instance& inst, const Outcome& x) {
    if (x.size() != inst.m())
        throw Error(ErrorCode::DimensionMismatch, "outcome size differs from candidate count");
    auto xs = entries_of(x);
    auto imp = lp::pareto_dominated(inst, xs);
    if (!imp) return CheckResult::ok();
    if (!x.is_exact()) {
        // require a clear improvement before reporting against a rounded outcome
        Rational gain = 0;
        for (std::size_t i = 0; i < inst.n(); ++i)
            gain += imp->old_disutilities[i] - imp->new_disutilities[i];
        if (gain <= approx_margin()) return CheckResult::ok();
    }
    std::size_t improved = 0;
    Rational best_gain = 0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
        Rational gain = imp->old_disutilities[i] - imp->new_disutilities[i];
        if (gain > best_gain) {
            best_gain = gain;
            improved = i;
        }
    }
    Witness w = base_witness(AxiomId::ParetoOptimality, rule, {inst});
    w.agent = improved;
    w.relation = "<=";
    w.lhs = imp->old_disutilities[improved];
    w.rhs = imp->new_disutilities[improved];
    w.dominator = imp->dominator;
    w.note = "another outcome weakly improves everyone and strictly improves this agent";
    return CheckResult::fail(std::move(w));
}

CheckResult check_pair(AxiomId axiom, RuleId rule, const Instance& a, const Instance& b,
                       const PairContext& ctx) {
    if (a.m() != b.m())
        throw Error(ErrorCode::BadPairContext, "pair instances differ in candidate count");

    switch (axiom) {
        case AxiomId::Independence: {
            if (!ctx.candidate)
                throw Error(ErrorCode::BadPairContext, "independence needs a candidate");
            std::size_t j = *ctx.candidate;
            if (j >= a.m()) throw Error(ErrorCode::BadPairContext, "candidate out of range");
            if (a.n() != b.n())
                throw Error(ErrorCode::BadPairContext, "independence needs the same agents");
            for (std::size_t i = 0; i < a.n(); ++i)
                if (a.score(i, j) != b.score(i, j))
                    throw Error(ErrorCode::BadPairContext, "shared candidate column differs");
            Outcome xa = rules::evaluate(rule, a);
            Outcome xb = rules::evaluate(rule, b);
            Rational va = entries_of(xa)[j], vb = entries_of(xb)[j];
            if (abs(va - vb) > margin_for(xa, xb)) {
                Witness w = base_witness(AxiomId::Independence, rule, {a, b});
                w.candidate = j;
                w.relation = "=";
                w.lhs = va;
                w.rhs = vb;
                w.note = "same column, different share";
                return CheckResult::fail(std::move(w));
            }
            return CheckResult::ok();
        }

        case AxiomId::ScoreMonotonicity: {
            if (!ctx.agent || !ctx.candidate)
                throw Error(ErrorCode::BadPairContext,
                            "score-monotonicity needs agent and candidate");
            std::size_t i = *ctx.agent, j = *ctx.candidate;
            if (i >= a.n() || j >= a.m())
                throw Error(ErrorCode::BadPairContext, "index out of range");
            if (a.n() != b.n())
                throw Error(ErrorCode::BadPairContext, "score-monotonicity needs the same agents");
            for (std::size_t k = 0; k < a.n(); ++k)
                if (k != i && !(a.row(k) == b.row(k)))
                    throw Error(ErrorCode::BadPairContext, "only one agent may move");
            if (!(a.score(i, j) < b.score(i, j)))
                throw Error(ErrorCode::BadPairContext, "agent must raise the candidate");
            for (std::size_t k = 0; k < a.m(); ++k)
                if (k != j && a.score(i, k) < b.score(i, k))
                    throw Error(ErrorCode::BadPairContext, "other scores may not increase");
            Outcome xa = rules::evaluate(rule, a);
            Outcome xb = rules::evaluate(rule, b);
            Rational va = entries_of(xa)[j], vb = entries_of(xb)[j];
            if (va > vb + margin_for(xa, xb)) {
                Witness w = base_witness(AxiomId::ScoreMonotonicity, rule, {a, b});
                w.agent = i;
                w.candidate = j;
                w.relation = "<=";
                w.lhs = va;
                w.rhs = vb;
                w.note = "raising the candidate lowered its share";
                return CheckResult::fail(std::move(w));
            }
            return CheckResult::ok();
        }

        case AxiomId::Strategyproofness: {
            if (!ctx.agent)
                throw Error(ErrorCode::BadPairContext, "strategyproofness needs an agent");
            std::size_t i = *ctx.agent;
            if (i >= a.n()) throw Error(ErrorCode::BadPairContext, "agent out of range");
            if (a.n() != b.n())
                throw Error(ErrorCode::BadPairContext, "strategyproofness needs the same agents");
            for (std::size_t k = 0; k < a.n(); ++k)
                if (k != i && !(a.row(k) == b.row(k)))
                    throw Error(ErrorCode::BadPairContext, "only the manipulator may deviate");
            Outcome xa = rules::evaluate(rule, a);
            Outcome xb = rules::evaluate(rule, b);
            Rational da = disutility(a.row(i), entries_of(xa));
            Rational db = disutility(a.row(i), entries_of(xb));
            if (db < da - margin_for(xa, xb)) {
                Witness w = base_witness(AxiomId::Strategyproofness, rule, {a, b});
                w.agent = i;
                w.relation = "<=";
                w.lhs = da;
                w.rhs = db;
                w.note = "misreporting strictly lowers the true disutility";
                return CheckResult::fail(std::move(w));
            }
            return CheckResult::ok();
        }

        case AxiomId::Reinforcement: {
            Outcome xa = rules::evaluate(rule, a);
            Outcome xb = rules::evaluate(rule, b);
            Rational tol = (xa.is_exact() && xb.is_exact()) ? Rational(0) : pow2_inverse(64);
            if (!xa.approx_equals(xb, tol)) return CheckResult::vacuous_pass();
            Outcome xc = rules::evaluate(rule, concat(a, b));
            Rational margin = margin_for(xa, xc);
            auto va = entries_of(xa), vc = entries_of(xc);
            for (std::size_t j = 0; j < a.m(); ++j) {
                if (abs(vc[j] - va[j]) > margin) {
                    Witness w = base_witness(AxiomId::Reinforcement, rule, {a, b});
                    w.candidate = j;
                    w.relation = "=";
                    w.lhs = vc[j];
                    w.rhs = va[j];
                    w.note = "combined electorate changes the agreed outcome";
                    return CheckResult::fail(std::move(w));
                }
            }
            return CheckResult::ok();
        }

        default:
            throw Error(ErrorCode::InvalidArgument, "not a pair axiom");
    }
}

CheckResult check_participation(RuleId rule, const Instance& inst, std::size_t agent) {
    if (agent >= inst.n()) throw Error(ErrorCode::BadIndex, "agent out of range");
    if (inst.n() < 2) throw Error(ErrorCode::EmptyInstance, "participation needs two agents");
    Outcome with_agent = rules::evaluate(rule, inst);
    Outcome without = rules::evaluate(rule, remove_agent(inst, agent));
    Rational dw = disutility(inst.row(agent), entries_of(with_agent));
    Rational dwo = disutility(inst.row(agent), entries_of(without));
    if (dw > dwo + margin_for(with_agent, without)) {
        Witness w = base_witness(AxiomId::Participation, rule, {inst});
        w.agent = agent;
        w.relation = "<=";
        w.lhs = dw;
        w.rhs = dwo;
        w.note = "abstaining strictly lowers this agent's disutility";
        return CheckResult::fail(std::move(w));
    }
    return CheckResult::ok();
}

bool replay(const Witness& w) {
    try {
        switch (axiom_arity(w.axiom)) {
            case AxiomArity::Single: {
                Outcome x = rules::evaluate(w.rule, w.instances.at(0));
                CheckResult r = check_single(w.axiom, w.rule, w.instances.at(0), x);
                return !r.pass;
            }
            case AxiomArity::Pair: {
                PairContext ctx{w.agent, w.candidate};
                CheckResult r =
                    check_pair(w.axiom, w.rule, w.instances.at(0), w.instances.at(1), ctx);
                return !r.pass;
            }
            case AxiomArity::Removal: {
                CheckResult r = check_participation(w.rule, w.instances.at(0), w.agent.value());
                return !r.pass;
            }
        }
    } catch (const Error&) {
        return false;
    }
    return false;
}

ImplicationReport implication_suite(RuleId rule, const Instance& inst, const Outcome& x) {
    ImplicationReport rep;
    rep.pareto = check_pareto(rule, inst, x);
    rep.range_respect = check_single(AxiomId::RangeRespect, rule, inst, x);
    rep.score_unanimity = check_single(AxiomId::ScoreUnanimity, rule, inst, x);
    if (rep.pareto.pass && !rep.range_respect.pass)
        rep.issues.push_back("pareto-optimal outcome fails range-respect");
    if (rep.range_respect.pass && !rep.score_unanimity.pass)
        rep.issues.push_back("range-respecting outcome fails score-unanimity");
    if ((inst.m() == 2 || inst.n() == 2) && rep.range_respect.pass && !rep.pareto.pass)
        rep.issues.push_back("range-respect should imply pareto-optimality here");
    rep.consistent = rep.issues.empty();
    return rep;
}

std::string Witness::to_json() const {
    json j;
    j["axiom"] = axiom_name(axiom);
    j["rule"] = rules::rule_name(rule);
    json insts = json::array();
    for (const auto& inst : instances) insts.push_back(json::parse(instance_to_json(inst)));
    j["instances"] = insts;
    json idx = json::object();
    if (agent) idx["agent"] = *agent + 1;  // 1-based in the wire format
    if (candidate) idx["candidate"] = *candidate + 1;
    j["indices"] = idx;
    j["lhs"] = render_rational(lhs);
    j["rhs"] = render_rational(rhs);
    j["relation"] = relation;
    if (gamma) j["gamma"] = render_rational(*gamma);
    if (dominator) {
        json d = json::array();
        for (const auto& v : *dominator) d.push_back(render_rational(v));
        j["dominator"] = d;
    }
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

}  // namespace portion::axioms
