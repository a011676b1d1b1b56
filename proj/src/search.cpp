#include "portion/search.hpp"

#include <json.hpp>

#include <algorithm>

namespace portion::search {

using axioms::AxiomId;
using axioms::CheckResult;
using axioms::PairContext;
using axioms::Witness;
using rules::RuleId;

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error(ErrorCode::InvalidArgument, "empty draw range");
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t v = gen_();
        if (v < limit) return v % bound;
    }
}

std::vector<Rational> sample_row(Rng& rng, std::size_t m, long grid) {
    // stars and bars: m-1 cut points in [0, grid]
    std::vector<long> cuts;
    cuts.reserve(m + 1);
    for (std::size_t i = 0; i + 1 < m; ++i)
        cuts.push_back(static_cast<long>(rng.below(static_cast<std::uint64_t>(grid) + 1)));
    cuts.push_back(0);
    cuts.push_back(grid);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> row;
    row.reserve(m);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) row.push_back(rat(cuts[i + 1] - cuts[i], grid));
    return row;
}

Instance sample_instance(Rng& rng, std::size_t m, std::size_t n, long grid) {
    std::vector<ScoreVector> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rows.emplace_back(sample_row(rng, m, grid));
    return Instance(m, std::move(rows));
}

Instance sample_instance(const SearchConfig& cfg, Rng& rng) {
    std::size_t m = cfg.m_min + rng.below(cfg.m_max - cfg.m_min + 1);
    std::size_t n = cfg.n_min + rng.below(cfg.n_max - cfg.n_min + 1);
    return sample_instance(rng, m, n, cfg.grid);
}

// ---------------------------------------------------------------------------
// Manipulation search
// ---------------------------------------------------------------------------

namespace {

Instance with_row(const Instance& inst, std::size_t agent, std::vector<Rational> row) {
    std::vector<ScoreVector> rows = inst.rows();
    rows[agent] = ScoreVector(std::move(row));
    return Instance(inst.m(), std::move(rows));
}

// Misreport evaluator. For the two phantom rules the hot loop patches Rat64
// columns in place instead of rebuilding instances; everything else goes
// through the ordinary evaluator.
class MisreportEvaluator {
public:
    MisreportEvaluator(RuleId rule, const Instance& inst, std::size_t agent)
        : rule_(rule), inst_(inst), agent_(agent) {
        if (rule == RuleId::Util || rule == RuleId::IM) {
            try {
                cols_.resize(inst.m());
                for (std::size_t j = 0; j < inst.m(); ++j) {
                    cols_[j].reserve(inst.n());
                    for (std::size_t i = 0; i < inst.n(); ++i)
                        cols_[j].push_back(Rat64::from(inst.score(i, j)));
                }
                truth_.reserve(inst.m());
                for (std::size_t j = 0; j < inst.m(); ++j)
                    truth_.push_back(Rat64::from(inst.score(agent, j)));
                fast_ = true;
            } catch (const SmallRatOverflow&) {
                fast_ = false;
            }
        }
    }

    // truthful-disutility of the manipulator under the outcome for `row`
    Rational disutility_for(const std::vector<Rational>& row) {
        if (fast_) {
            try {
                for (std::size_t j = 0; j < cols_.size(); ++j)
                    cols_[j][agent_] = Rat64::from(row[j]);
                std::vector<Rat64> meds = rule_ == RuleId::IM
                                              ? rules::detail::phantom_medians_im(cols_)
                                              : rules::detail::phantom_medians_ladder(cols_);
                Rat64 d(0);
                for (std::size_t j = 0; j < meds.size(); ++j) {
                    Rat64 diff = truth_[j] - meds[j];
                    if (diff < Rat64(0)) diff = -diff;
                    d = d + diff;
                }
                return d.to_rational();
            } catch (const SmallRatOverflow&) {
                fast_ = false;  // permanent fallback for this instance
            }
        }
        Outcome x = rules::evaluate(rule_, with_row(inst_, agent_, row));
        return disutility(inst_.row(agent_), x.as_rationals());
    }

private:
    RuleId rule_;
    const Instance& inst_;
    std::size_t agent_;
    bool fast_ = false;
    std::vector<std::vector<Rat64>> cols_;
    std::vector<Rat64> truth_;
};

}  // namespace

std::optional<Witness> find_manipulation(RuleId rule, const Instance& inst, std::size_t agent,
                                         std::size_t budget, long grid, Rng& rng,
                                         std::size_t* evals_used) {
    if (agent >= inst.n()) throw Error(ErrorCode::BadIndex, "agent out of range");
    const std::size_t m = inst.m();
    const Rational step = rat(1, grid);
    const ScoreVector& truth = inst.row(agent);

    Outcome truthful = rules::evaluate(rule, inst);
    const bool exact = truthful.is_exact();
    const Rational margin = exact ? Rational(0) : axioms::approx_margin();
    const Rational d_true = disutility(truth, truthful.as_rationals());

    std::size_t evals = 0;
    Rational best_drop = margin;
    std::optional<std::vector<Rational>> best_row;
    MisreportEvaluator evaluator(rule, inst, agent);

    auto try_row = [&](const std::vector<Rational>& row) -> std::optional<Rational> {
        if (evals >= budget) return std::nullopt;
        ++evals;
        Rational drop = d_true - evaluator.disutility_for(row);
        if (drop > best_drop) {
            best_drop = drop;
            best_row = row;
        }
        return drop;
    };

    std::vector<Rational> current = truth.entries();
    Rational current_drop = 0;
    while (evals < budget) {
        // single-step mass moves between coordinate pairs
        std::vector<Rational> best_nb;
        Rational best_nb_drop = current_drop;
        for (std::size_t from = 0; from < m && evals < budget; ++from) {
            if (current[from] < step) continue;
            for (std::size_t to = 0; to < m && evals < budget; ++to) {
                if (to == from) continue;
                std::vector<Rational> nb = current;
                nb[from] -= step;
                nb[to] += step;
                auto drop = try_row(nb);
                if (drop && *drop > best_nb_drop) {
                    best_nb_drop = *drop;
                    best_nb = std::move(nb);
                }
            }
        }
        if (!best_nb.empty()) {
            current = std::move(best_nb);
            current_drop = best_nb_drop;
        } else {
            if (evals >= budget) break;
            current = sample_row(rng, m, grid);
            auto drop = try_row(current);
            current_drop = drop.value_or(Rational(0));
        }
    }

    if (evals_used) *evals_used = evals;
    if (!best_row) return std::nullopt;

    Instance manipulated = with_row(inst, agent, *best_row);
    CheckResult check = axioms::check_pair(AxiomId::Strategyproofness, rule, inst, manipulated,
                                           PairContext{agent, std::nullopt});
    if (check.pass)
        throw Error(ErrorCode::Internal, "manipulation found but checker disagrees");
    return check.witness;
}

// ---------------------------------------------------------------------------
// Axiom violation search
// ---------------------------------------------------------------------------

namespace {

// Re-randomizes every column except `keep`, preserving row sums.
Instance resample_other_columns(const Instance& inst, std::size_t keep, long grid, Rng& rng) {
    std::vector<ScoreVector> rows;
    rows.reserve(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) {
        Rational kept = inst.score(i, keep);
        Rational rest = Rational(1) - kept;
        long units = static_cast<long>(mpz_class(rest.get_num() * grid / rest.get_den()).get_si());
        std::vector<Rational> other =
            inst.m() >= 2 ? sample_row(rng, inst.m() - 1, std::max(units, 1L))
                          : std::vector<Rational>{};
        std::vector<Rational> row(inst.m());
        row[keep] = kept;
        std::size_t t = 0;
        for (std::size_t j = 0; j < inst.m(); ++j)
            if (j != keep) row[j] = sgn(rest) == 0 ? Rational(0) : other[t++] * rest;
        rows.emplace_back(std::move(row));
    }
    return Instance(inst.m(), std::move(rows));
}

}  // namespace

SearchOutcome find_axiom_violation(RuleId rule, AxiomId axiom, const SearchConfig& cfg) {
    Rng rng(cfg.seed);
    SearchOutcome out;

    auto charge = [&](std::size_t k) { out.evaluations += k; };

    while (out.evaluations < cfg.trials) {
        ++out.trials_run;
        CheckResult result;
        switch (axiom) {
            case AxiomId::RangeRespect:
            case AxiomId::ScoreUnanimity:
            case AxiomId::ScoreRepresentation:
            case AxiomId::SingleMindedProportionality:
            case AxiomId::ParetoOptimality: {
                Instance inst = sample_instance(cfg, rng);
                Outcome x = rules::evaluate(rule, inst);
                charge(1);
                result = axioms::check_single(axiom, rule, inst, x);
                break;
            }
            case AxiomId::Independence: {
                Instance a = sample_instance(cfg, rng);
                std::size_t j = rng.below(a.m());
                Instance b = resample_other_columns(a, j, cfg.grid, rng);
                charge(2);
                result = axioms::check_pair(axiom, rule, a, b, PairContext{std::nullopt, j});
                break;
            }
            case AxiomId::ScoreMonotonicity: {
                Instance a = sample_instance(cfg, rng);
                std::size_t i = rng.below(a.n());
                std::size_t j = rng.below(a.m());
                std::vector<std::size_t> donors;
                for (std::size_t k = 0; k < a.m(); ++k)
                    if (k != j && sgn(a.score(i, k)) > 0) donors.push_back(k);
                if (donors.empty()) continue;  // row already concentrated on j
                std::size_t k = donors[rng.below(donors.size())];
                Rational avail = a.score(i, k);
                long units = static_cast<long>(
                    mpz_class(avail.get_num() * cfg.grid / avail.get_den()).get_si());
                if (units <= 0) continue;
                Rational delta = rat(1 + static_cast<long>(rng.below(units)), cfg.grid);
                std::vector<ScoreVector> rows = a.rows();
                std::vector<Rational> moved = rows[i].entries();
                moved[j] += delta;
                moved[k] -= delta;
                rows[i] = ScoreVector(std::move(moved));
                Instance b(a.m(), std::move(rows));
                charge(2);
                result = axioms::check_pair(axiom, rule, a, b, PairContext{i, j});
                break;
            }
            case AxiomId::Strategyproofness: {
                Instance inst = sample_instance(cfg, rng);
                std::size_t agent = rng.below(inst.n());
                std::size_t remaining = cfg.trials - out.evaluations;
                std::size_t used = 0;
                auto w = find_manipulation(rule, inst, agent,
                                           std::min(cfg.manipulation_budget, remaining),
                                           cfg.grid, rng, &used);
                charge(used + 1);
                if (w) {
                    out.witness = std::move(w);
                    return out;
                }
                continue;
            }
            case AxiomId::Reinforcement: {
                bool singleton_mode = out.trials_run % 2 == 1 && rules::rule_is_exact(rule);
                if (singleton_mode) {
                    std::size_t m = cfg.m_min + rng.below(cfg.m_max - cfg.m_min + 1);
                    std::size_t n = cfg.n_min + rng.below(cfg.n_max - cfg.n_min + 1);
                    Instance a = sample_instance(rng, m, n, cfg.grid);
                    Outcome fa = rules::evaluate(rule, a);
                    charge(1);
                    Instance b(m, {ScoreVector(fa.rationals())});
                    charge(3);
                    result = axioms::check_pair(axiom, rule, a, b, PairContext{});
                } else {
                    // duplicate the electorate; keep the combined size in range
                    std::size_t m = cfg.m_min + rng.below(cfg.m_max - cfg.m_min + 1);
                    std::size_t half = std::max<std::size_t>(1, cfg.n_max / 2);
                    std::size_t n = 1 + rng.below(half);
                    Instance a = sample_instance(rng, m, n, cfg.grid);
                    charge(3);
                    result = check_pair(axiom, rule, a, a, PairContext{});
                }
                break;
            }
            case AxiomId::Participation: {
                std::size_t m = cfg.m_min + rng.below(cfg.m_max - cfg.m_min + 1);
                std::size_t n = std::max<std::size_t>(2, cfg.n_min) +
                                rng.below(cfg.n_max - std::max<std::size_t>(2, cfg.n_min) + 1);
                Instance inst = sample_instance(rng, m, n, cfg.grid);
                std::size_t agent = rng.below(inst.n());
                charge(2);
                result = axioms::check_participation(rule, inst, agent);
                break;
            }
        }
        if (!result.pass) {
            out.witness = std::move(result.witness);
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Characterization families
// ---------------------------------------------------------------------------

namespace {

Instance family_instance(std::size_t m, const std::vector<std::array<Rational, 3>>& triples) {
    std::vector<ScoreVector> rows;
    rows.reserve(triples.size());
    for (const auto& t : triples) {
        std::vector<Rational> row(m, Rational(0));
        row[0] = t[0];
        row[1] = t[1];
        row[2] = t[2];
        rows.emplace_back(std::move(row));
    }
    return Instance(m, std::move(rows));
}

}  // namespace

CharacterizationFamily characterization_family(FamilyStep step, std::size_t n, std::size_t m,
                                               const Rational& gamma) {
    if (m < 3)
        throw Error(ErrorCode::InvalidArgument, "family construction needs at least 3 candidates");
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "family construction needs at least 2 agents");
    if (sgn(gamma) <= 0 || gamma > 1)
        throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1]");
    const Rational cg = Rational(1) - gamma;

    CharacterizationFamily fam;
    switch (step) {
        case FamilyStep::Step1: {
            std::vector<std::array<Rational, 3>> t1{{gamma, cg, Rational(0)}};
            std::vector<std::array<Rational, 3>> t2{{cg, gamma, Rational(0)}};
            for (std::size_t i = 1; i < n; ++i) {
                t1.push_back({Rational(0), cg, gamma});
                t2.push_back({cg, Rational(0), gamma});
            }
            fam.instances.push_back(family_instance(m, t1));
            fam.instances.push_back(family_instance(m, t2));
            fam.independence_pairs.emplace_back(0, 1, 2);  // both give column 3 as (0, gamma, ...)
            break;
        }
        case FamilyStep::Step2: {
            for (std::size_t k = 1; k < n; ++k) {
                std::vector<std::array<Rational, 3>> rows;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i < k) rows.push_back({gamma, Rational(0), cg});
                    else rows.push_back({Rational(0), gamma, cg});
                }
                fam.instances.push_back(family_instance(m, rows));
            }
            for (std::size_t k = 0; k + 1 < fam.instances.size(); ++k)
                fam.independence_pairs.emplace_back(k, k + 1, 2);  // shared all-cg column
            break;
        }
        case FamilyStep::Step3: {
            // plain members: k agents report (gamma, 1-gamma, 0), the rest (0, 1, 0)
            for (std::size_t k = 1; k <= n; ++k) {
                std::vector<std::array<Rational, 3>> rows;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i < k) rows.push_back({gamma, cg, Rational(0)});
                    else rows.push_back({Rational(0), Rational(1), Rational(0)});
                }
                fam.instances.push_back(family_instance(m, rows));
            }
            // barred members: agent k+1 moves her first-candidate mass to c3
            for (std::size_t k = 1; k < n; ++k) {
                std::vector<std::array<Rational, 3>> rows;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i < k) rows.push_back({gamma, cg, Rational(0)});
                    else if (i == k) rows.push_back({Rational(0), cg, gamma});
                    else rows.push_back({Rational(0), Rational(1), Rational(0)});
                }
                fam.instances.push_back(family_instance(m, rows));
            }
            // I^k and bar-I^k share column 1; bar-I^k and I^{k+1} share column 2
            for (std::size_t k = 1; k < n; ++k) {
                fam.independence_pairs.emplace_back(k - 1, n + k - 1, 0);
                fam.independence_pairs.emplace_back(n + k - 1, k, 1);
            }
            break;
        }
    }
    return fam;
}

std::string report_json(rules::RuleId rule, axioms::AxiomId axiom, const SearchConfig& cfg,
                        const SearchOutcome& outcome, double wall_seconds) {
    nlohmann::json j;
    j["rule"] = rules::rule_name(rule);
    j["axiom"] = axioms::axiom_name(axiom);
    j["config"] = {{"seed", cfg.seed},
                   {"trials", cfg.trials},
                   {"m_range", {cfg.m_min, cfg.m_max}},
                   {"n_range", {cfg.n_min, cfg.n_max}},
                   {"grid", cfg.grid},
                   {"manipulation_budget", cfg.manipulation_budget}};
    j["evaluations"] = outcome.evaluations;
    j["trials_run"] = outcome.trials_run;
    j["witness"] = outcome.witness ? nlohmann::json::parse(outcome.witness->to_json())
                                   : nlohmann::json(nullptr);
    j["wall_seconds"] = wall_seconds;
    return j.dump();
}

}  // namespace portion::search
