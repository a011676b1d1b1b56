#include <cassert>
#include <cstdint>
#include <map>

#include "portion/lp.hpp"

namespace portion::lp {

namespace {

std::vector<Rational> column_average(const Instance& inst) {
    std::vector<Rational> avg(inst.m(), Rational(0));
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = 0; j < inst.m(); ++j) avg[j] += inst.score(i, j);
    Rational n(static_cast<long>(inst.n()));
    for (auto& v : avg) v /= n;
    return avg;
}

// ---------------------------------------------------------------------------
// Cut engine. Per-agent disutility constraints d_i(x) + extra <= cap are
// enforced through sign-pattern cuts sigma.(s_i - x) + extra <= cap, with
// sigma in {-1,+1}^m. Patterns are generated lazily from violating points and
// shared across the linear programs of one evaluation; there are finitely
// many, so the refinement loop terminates with an exact optimum.
// ---------------------------------------------------------------------------

using Pattern = std::uint32_t;  // bit j set => sigma_j = +1

class PatternPool {
public:
    explicit PatternPool(const Instance& inst) : inst_(&inst), pats_(inst.n()) {
        // start from each agent's position relative to uniform
        Rational u(1, static_cast<long>(inst.m()));
        u.canonicalize();
        for (std::size_t i = 0; i < inst.n(); ++i) {
            Pattern p = 0;
            for (std::size_t j = 0; j < inst.m(); ++j)
                if (inst.score(i, j) >= u) p |= Pattern(1) << j;
            pats_[i].push_back(p);
        }
    }

    const std::vector<Pattern>& of(std::size_t agent) const { return pats_[agent]; }

    bool add(std::size_t agent, Pattern p) {
        auto& v = pats_[agent];
        for (Pattern q : v)
            if (q == p) return false;
        v.push_back(p);
        return true;
    }

    Pattern pattern_at(std::size_t agent, const std::vector<Rational>& x) const {
        Pattern p = 0;
        for (std::size_t j = 0; j < inst_->m(); ++j)
            if (inst_->score(agent, j) >= x[j]) p |= Pattern(1) << j;
        return p;
    }

private:
    const Instance* inst_;
    std::vector<std::vector<Pattern>> pats_;
};

struct AgentCap {
    std::size_t agent;
    Rational cap_const;
    // extra linear terms on the left-hand side: sum coef * var
    std::vector<std::pair<std::size_t, Rational>> extra;
};

struct CutModel {
    const Instance* inst = nullptr;
    std::size_t num_vars = 0;  // x vars occupy [0, m)
    bool maximize = false;
    std::vector<Rational> objective;
    std::vector<LinearProgram::Row> base_rows;
    std::vector<AgentCap> agent_caps;
    std::vector<std::string> var_names;
};

LinearProgram assemble(const CutModel& model, const PatternPool& pool) {
    const auto& inst = *model.inst;
    LinearProgram p;
    p.num_vars = model.num_vars;
    p.maximize = model.maximize;
    p.objective = model.objective;
    p.rows = model.base_rows;
    p.var_names = model.var_names;
    for (const auto& ac : model.agent_caps) {
        for (Pattern sig : pool.of(ac.agent)) {
            LinearProgram::Row row;
            row.coeffs.assign(model.num_vars, Rational(0));
            Rational rhs = ac.cap_const;
            for (std::size_t j = 0; j < inst.m(); ++j) {
                bool plus = (sig >> j) & 1;
                row.coeffs[j] = plus ? Rational(-1) : Rational(1);
                if (plus) rhs -= inst.score(ac.agent, j);
                else rhs += inst.score(ac.agent, j);
            }
            for (const auto& [var, coef] : ac.extra) row.coeffs[var] += coef;
            row.rel = Relation::LessEq;
            row.rhs = rhs;
            p.rows.push_back(std::move(row));
        }
    }
    return p;
}

LpSolution solve_with_cuts(const CutModel& model, PatternPool& pool) {
    const auto& inst = *model.inst;
    for (int round = 0;; ++round) {
        LpSolution sol = solve_lp(assemble(model, pool));
        if (sol.status != LpStatus::Optimal)
            throw Error(ErrorCode::Internal, "welfare program not optimal");
        std::vector<Rational> x(sol.values.begin(), sol.values.begin() + inst.m());
        bool violated = false;
        for (const auto& ac : model.agent_caps) {
            Rational lhs = 0;
            for (std::size_t j = 0; j < inst.m(); ++j)
                lhs += abs(inst.score(ac.agent, j) - x[j]);
            for (const auto& [var, coef] : ac.extra) lhs += coef * sol.values[var];
            if (lhs > ac.cap_const) {
                if (!pool.add(ac.agent, pool.pattern_at(ac.agent, x)))
                    throw Error(ErrorCode::Internal, "cut refinement stalled");
                violated = true;
            }
        }
        if (!violated) return sol;
        if (round > static_cast<int>(inst.n()) * (1 << inst.m()) + 8)
            throw Error(ErrorCode::Internal, "cut refinement did not terminate");
    }
}

std::vector<Rational> exact_disutilities(const Instance& inst, const std::vector<Rational>& x) {
    std::vector<Rational> d;
    d.reserve(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) d.push_back(disutility(inst.row(i), x));
    return d;
}

// min over feasible outcomes of max_{unfrozen} d_i, with frozen agents held
// at their caps. Returns (value, point).
struct MinmaxResult {
    Rational value;
    std::vector<Rational> point;
};

MinmaxResult solve_minmax(const Instance& inst, const std::vector<int>& frozen,
                          const std::vector<Rational>& caps, PatternPool& pool) {
    const std::size_t m = inst.m();
    CutModel model;
    model.inst = &inst;
    model.num_vars = m + 1;  // x, xi
    model.objective.assign(m + 1, Rational(0));
    model.objective[m] = 1;
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(m + 1, Rational(0));
    for (std::size_t j = 0; j < m; ++j) simplex_row.coeffs[j] = 1;
    simplex_row.rel = Relation::Equal;
    simplex_row.rhs = 1;
    model.base_rows.push_back(simplex_row);
    for (std::size_t i = 0; i < inst.n(); ++i) {
        AgentCap ac;
        ac.agent = i;
        if (frozen[i]) {
            ac.cap_const = caps[i];
        } else {
            ac.cap_const = 0;
            ac.extra.emplace_back(m, Rational(-1));
        }
        model.agent_caps.push_back(std::move(ac));
    }
    LpSolution sol = solve_with_cuts(model, pool);
    return {sol.values[m], {sol.values.begin(), sol.values.begin() + m}};
}

// Maximum slack delta such that agent i can sit at xi - delta while all other
// unfrozen agents stay within xi and frozen agents within their caps.
struct DeltaResult {
    Rational delta;
    std::vector<Rational> point;
};

DeltaResult solve_max_delta(const Instance& inst, std::size_t agent, const Rational& xi,
                            const std::vector<int>& frozen, const std::vector<Rational>& caps,
                            PatternPool& pool) {
    const std::size_t m = inst.m();
    CutModel model;
    model.inst = &inst;
    model.num_vars = m + 1;  // x, delta
    model.maximize = true;
    model.objective.assign(m + 1, Rational(0));
    model.objective[m] = 1;
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(m + 1, Rational(0));
    for (std::size_t j = 0; j < m; ++j) simplex_row.coeffs[j] = 1;
    simplex_row.rel = Relation::Equal;
    simplex_row.rhs = 1;
    model.base_rows.push_back(simplex_row);
    for (std::size_t i = 0; i < inst.n(); ++i) {
        AgentCap ac;
        ac.agent = i;
        if (i == agent) {
            ac.cap_const = xi;
            ac.extra.emplace_back(m, Rational(1));
        } else if (frozen[i]) {
            ac.cap_const = caps[i];
        } else {
            ac.cap_const = xi;
        }
        model.agent_caps.push_back(std::move(ac));
    }
    LpSolution sol = solve_with_cuts(model, pool);
    return {sol.objective, {sol.values.begin(), sol.values.begin() + m}};
}

}  // namespace

Rational minmax_disutility(const Instance& inst) {
    PatternPool pool(inst);
    std::vector<int> frozen(inst.n(), 0);
    std::vector<Rational> caps(inst.n(), Rational(0));
    return solve_minmax(inst, frozen, caps, pool).value;
}

Outcome egal_leximin(const Instance& inst) {
    const std::size_t n = inst.n(), m = inst.m();
    if (n == 1) return Outcome::exact(inst.row(0).entries());
    if (n == 2) return Outcome::exact(column_average(inst));

    PatternPool pool(inst);
    std::vector<int> frozen(n, 0);
    std::vector<Rational> caps(n, Rational(0));
    std::size_t frozen_count = 0;

    while (frozen_count < n) {
        MinmaxResult mm = solve_minmax(inst, frozen, caps, pool);
        if (sgn(mm.value) == 0) {
            // nobody can be below zero; all remaining agents are pinned
            for (std::size_t i = 0; i < n; ++i) {
                if (!frozen[i]) {
                    frozen[i] = 1;
                    caps[i] = 0;
                    ++frozen_count;
                }
            }
            break;
        }
        std::vector<Rational> cur = mm.point;
        bool froze = false;
        for (std::size_t i = 0; i < n && !froze; ++i) {
            if (frozen[i]) continue;
            if (disutility(inst.row(i), cur) < mm.value) continue;  // slack exists
            DeltaResult dr = solve_max_delta(inst, i, mm.value, frozen, caps, pool);
            if (sgn(dr.delta) == 0) {
                frozen[i] = 1;
                caps[i] = mm.value;
                ++frozen_count;
                froze = true;
            } else {
                cur = dr.point;  // certificate that agent i has slack
            }
        }
        if (!froze && frozen_count < n)
            throw Error(ErrorCode::Internal, "leximin round fixed no agent");
    }

    // Remaining ties: closest to the coordinate average in l1, then the
    // lexicographically smallest outcome vector, via one LP per stage.
    std::vector<Rational> avg = column_average(inst);
    CutModel model;
    model.inst = &inst;
    model.num_vars = 2 * m;  // x, residuals r
    model.objective.assign(2 * m, Rational(0));
    for (std::size_t j = 0; j < m; ++j) model.objective[m + j] = 1;
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(2 * m, Rational(0));
    for (std::size_t j = 0; j < m; ++j) simplex_row.coeffs[j] = 1;
    simplex_row.rel = Relation::Equal;
    simplex_row.rhs = 1;
    model.base_rows.push_back(simplex_row);
    for (std::size_t j = 0; j < m; ++j) {
        LinearProgram::Row hi, lo;
        hi.coeffs.assign(2 * m, Rational(0));
        hi.coeffs[j] = 1;
        hi.coeffs[m + j] = -1;
        hi.rel = Relation::LessEq;
        hi.rhs = avg[j];
        lo.coeffs.assign(2 * m, Rational(0));
        lo.coeffs[j] = -1;
        lo.coeffs[m + j] = -1;
        lo.rel = Relation::LessEq;
        lo.rhs = -avg[j];
        model.base_rows.push_back(std::move(hi));
        model.base_rows.push_back(std::move(lo));
    }
    for (std::size_t i = 0; i < n; ++i)
        model.agent_caps.push_back(AgentCap{i, caps[i], {}});

    LpSolution stage_a = solve_with_cuts(model, pool);
    Rational closest = stage_a.objective;

    LinearProgram::Row budget;
    budget.coeffs.assign(2 * m, Rational(0));
    for (std::size_t j = 0; j < m; ++j) budget.coeffs[m + j] = 1;
    budget.rel = Relation::LessEq;
    budget.rhs = closest;
    model.base_rows.push_back(std::move(budget));

    std::vector<Rational> out;
    for (std::size_t j = 0; j < m; ++j) {
        model.objective.assign(2 * m, Rational(0));
        model.objective[j] = 1;
        LpSolution sj = solve_with_cuts(model, pool);
        out = {sj.values.begin(), sj.values.begin() + m};
        LinearProgram::Row fix;
        fix.coeffs.assign(2 * m, Rational(0));
        fix.coeffs[j] = 1;
        fix.rel = Relation::Equal;
        fix.rhs = sj.values[j];
        model.base_rows.push_back(std::move(fix));
    }
    return Outcome::exact(std::move(out));
}

std::optional<ParetoImprovement> pareto_dominated(const Instance& inst,
                                                  const std::vector<Rational>& x) {
    const std::size_t n = inst.n(), m = inst.m();
    if (x.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "outcome length differs from candidate count");

    std::vector<Rational> caps = exact_disutilities(inst, x);
    Rational total0 = 0;
    for (const auto& c : caps) total0 += c;

    PatternPool pool(inst);
    CutModel model;
    model.inst = &inst;
    model.num_vars = m + n;  // x, per-agent bounds w
    model.objective.assign(m + n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) model.objective[m + i] = 1;
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(m + n, Rational(0));
    for (std::size_t j = 0; j < m; ++j) simplex_row.coeffs[j] = 1;
    simplex_row.rel = Relation::Equal;
    simplex_row.rhs = 1;
    model.base_rows.push_back(simplex_row);
    for (std::size_t i = 0; i < n; ++i) {
        LinearProgram::Row capr;
        capr.coeffs.assign(m + n, Rational(0));
        capr.coeffs[m + i] = 1;
        capr.rel = Relation::LessEq;
        capr.rhs = caps[i];
        model.base_rows.push_back(std::move(capr));
        model.agent_caps.push_back(AgentCap{i, Rational(0), {{m + i, Rational(-1)}}});
    }
    LpSolution sol = solve_with_cuts(model, pool);
    if (sol.objective == total0) return std::nullopt;
    assert(sol.objective < total0);

    ParetoImprovement imp;
    imp.dominator = {sol.values.begin(), sol.values.begin() + m};
    imp.old_disutilities = std::move(caps);
    imp.new_disutilities = exact_disutilities(inst, imp.dominator);
    return imp;
}

Rational min_total_disutility(const Instance& inst) {
    const std::size_t n = inst.n(), m = inst.m();
    PatternPool pool(inst);
    CutModel model;
    model.inst = &inst;
    model.num_vars = m + n;
    model.objective.assign(m + n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) model.objective[m + i] = 1;
    LinearProgram::Row simplex_row;
    simplex_row.coeffs.assign(m + n, Rational(0));
    for (std::size_t j = 0; j < m; ++j) simplex_row.coeffs[j] = 1;
    simplex_row.rel = Relation::Equal;
    simplex_row.rhs = 1;
    model.base_rows.push_back(simplex_row);
    for (std::size_t i = 0; i < n; ++i)
        model.agent_caps.push_back(AgentCap{i, Rational(0), {{m + i, Rational(-1)}}});
    return solve_with_cuts(model, pool).objective;
}

// ---------------------------------------------------------------------------
// Utilitarian optimal face. Total disutility separates across candidates:
// sum_i d_i(x) = sum_j g_j(x_j) with g_j convex piecewise linear, so the
// optimal face is the box of per-coordinate argmin intervals of
// g_j(v) - lambda*v (lambda an optimal dual of the sum constraint, found by
// scanning the integer slope range) intersected with the simplex hyperplane.
// ---------------------------------------------------------------------------

namespace {

struct ArgminInterval {
    Rational lo, hi, min_value;
};

// argmin over [0,1] of g(v) - lambda*v where g(v) = sum_i |c_i - v|
ArgminInterval column_argmin(const std::vector<Rational>& column, const Rational& lambda) {
    std::vector<Rational> bp = column;
    bp.push_back(Rational(0));
    bp.push_back(Rational(1));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    while (!bp.empty() && bp.front() < 0) bp.erase(bp.begin());

    ArgminInterval out;
    bool any_neg = false, any_pos = false;
    Rational first_pos = 1, last_neg = 0;
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        long below = 0, above = 0;
        for (const auto& c : column) {
            if (c <= bp[k]) ++below;
            if (c >= bp[k + 1]) ++above;
        }
        Rational slope = Rational(below - above) - lambda;
        if (sgn(slope) < 0) {
            any_neg = true;
            last_neg = bp[k + 1];
        } else if (sgn(slope) > 0 && !any_pos) {
            any_pos = true;
            first_pos = bp[k];
        }
    }
    out.lo = any_neg ? last_neg : bp.front();
    out.hi = any_pos ? first_pos : bp.back();

    Rational g = 0;
    for (const auto& c : column) g += abs(c - out.lo);
    out.min_value = g - lambda * out.lo;
    return out;
}

}  // namespace

OptimalFace util_optimal_face(const Instance& inst) {
    const std::size_t m = inst.m();
    const long n = static_cast<long>(inst.n());
    Rational welfare = min_total_disutility(inst);

    std::vector<std::vector<Rational>> cols;
    cols.reserve(m);
    for (std::size_t j = 0; j < m; ++j) cols.push_back(inst.column(j));

    for (long lam = -n; lam <= n; ++lam) {
        Rational lambda(lam);
        std::vector<Rational> lo(m), hi(m);
        Rational sum_lo = 0, sum_hi = 0, dual = lambda;
        for (std::size_t j = 0; j < m; ++j) {
            ArgminInterval iv = column_argmin(cols[j], lambda);
            lo[j] = iv.lo;
            hi[j] = iv.hi;
            sum_lo += iv.lo;
            sum_hi += iv.hi;
            dual += iv.min_value;
        }
        if (sum_lo <= 1 && 1 <= sum_hi) {
            if (dual != welfare)
                throw Error(ErrorCode::Internal, "dual value disagrees with welfare optimum");
            return OptimalFace{std::move(lo), std::move(hi), welfare};
        }
    }
    throw Error(ErrorCode::Internal, "no optimal dual found");
}

Outcome util_two_stage(const Instance& inst) {
    const std::size_t m = inst.m();
    if (inst.n() == 1) return Outcome::exact(inst.row(0).entries());
    OptimalFace face = util_optimal_face(inst);
    Rational u(1, static_cast<long>(m));
    u.canonicalize();

    // Euclidean projection of uniform onto (box  intersect  sum = 1) by exact
    // water-filling: x_j = clip(u + tau, lo_j, hi_j), solved for tau.
    std::vector<Rational> taus;
    for (std::size_t j = 0; j < m; ++j) {
        taus.push_back(face.lower[j] - u);
        taus.push_back(face.upper[j] - u);
    }
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    auto sum_at = [&](const Rational& tau) {
        Rational s = 0;
        for (std::size_t j = 0; j < m; ++j) {
            Rational v = u + tau;
            if (v < face.lower[j]) v = face.lower[j];
            if (v > face.upper[j]) v = face.upper[j];
            s += v;
        }
        return s;
    };

    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(taus.size());
    for (const auto& t : taus) pts.emplace_back(t, sum_at(t));
    PiecewiseLinear f(std::move(pts));
    Rational tau = solve_monotone_pwl(f, Rational(1));

    std::vector<Rational> x(m);
    for (std::size_t j = 0; j < m; ++j) {
        Rational v = u + tau;
        if (v < face.lower[j]) v = face.lower[j];
        if (v > face.upper[j]) v = face.upper[j];
        x[j] = v;
    }
    return Outcome::exact(std::move(x));
}

// ---------------------------------------------------------------------------
// Literal dense formulations
// ---------------------------------------------------------------------------

LinearProgram build_minmax_program(const Instance& inst) {
    const std::size_t n = inst.n(), m = inst.m();
    LinearProgram p;
    p.num_vars = m + n * m + 1;
    const std::size_t xi = m + n * m;
    p.objective.assign(p.num_vars, Rational(0));
    p.objective[xi] = 1;
    p.var_names.resize(p.num_vars);
    for (std::size_t j = 0; j < m; ++j) p.var_names[j] = "x" + std::to_string(j + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            p.var_names[m + i * m + j] = "z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
    p.var_names[xi] = "xi";

    LinearProgram::Row sum_row;
    sum_row.coeffs.assign(p.num_vars, Rational(0));
    for (std::size_t j = 0; j < m; ++j) sum_row.coeffs[j] = 1;
    sum_row.rel = Relation::Equal;
    sum_row.rhs = 1;
    p.rows.push_back(std::move(sum_row));

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t z = m + i * m + j;
            LinearProgram::Row above, below;
            above.coeffs.assign(p.num_vars, Rational(0));
            above.coeffs[j] = -1;
            above.coeffs[z] = -1;
            above.rel = Relation::LessEq;
            above.rhs = -inst.score(i, j);
            below.coeffs.assign(p.num_vars, Rational(0));
            below.coeffs[j] = 1;
            below.coeffs[z] = -1;
            below.rel = Relation::LessEq;
            below.rhs = inst.score(i, j);
            p.rows.push_back(std::move(above));
            p.rows.push_back(std::move(below));
        }
        LinearProgram::Row cap;
        cap.coeffs.assign(p.num_vars, Rational(0));
        for (std::size_t j = 0; j < m; ++j) cap.coeffs[m + i * m + j] = 1;
        cap.coeffs[xi] = -1;
        cap.rel = Relation::LessEq;
        cap.rhs = 0;
        p.rows.push_back(std::move(cap));
    }
    return p;
}

LinearProgram build_pareto_program(const Instance& inst, const std::vector<Rational>& x0) {
    const std::size_t n = inst.n(), m = inst.m();
    if (x0.size() != m)
        throw Error(ErrorCode::DimensionMismatch, "outcome length differs from candidate count");
    LinearProgram p;
    p.num_vars = m + n * m;
    p.objective.assign(p.num_vars, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) p.objective[m + i * m + j] = 1;
    p.var_names.resize(p.num_vars);
    for (std::size_t j = 0; j < m; ++j) p.var_names[j] = "x" + std::to_string(j + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            p.var_names[m + i * m + j] = "z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);

    LinearProgram::Row sum_row;
    sum_row.coeffs.assign(p.num_vars, Rational(0));
    for (std::size_t j = 0; j < m; ++j) sum_row.coeffs[j] = 1;
    sum_row.rel = Relation::Equal;
    sum_row.rhs = 1;
    p.rows.push_back(std::move(sum_row));

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t z = m + i * m + j;
            LinearProgram::Row above, below;
            above.coeffs.assign(p.num_vars, Rational(0));
            above.coeffs[j] = -1;
            above.coeffs[z] = -1;
            above.rel = Relation::LessEq;
            above.rhs = -inst.score(i, j);
            below.coeffs.assign(p.num_vars, Rational(0));
            below.coeffs[j] = 1;
            below.coeffs[z] = -1;
            below.rel = Relation::LessEq;
            below.rhs = inst.score(i, j);
            p.rows.push_back(std::move(above));
            p.rows.push_back(std::move(below));
        }
        LinearProgram::Row cap;
        cap.coeffs.assign(p.num_vars, Rational(0));
        for (std::size_t j = 0; j < m; ++j) cap.coeffs[m + i * m + j] = 1;
        cap.rel = Relation::LessEq;
        cap.rhs = disutility(inst.row(i), x0);
        p.rows.push_back(std::move(cap));
    }
    return p;
}

Rational minmax_disutility_dense(const Instance& inst) {
    LpSolution sol = solve_lp(build_minmax_program(inst));
    if (sol.status != LpStatus::Optimal)
        throw Error(ErrorCode::Internal, "dense minmax program not optimal");
    return sol.objective;
}

}  // namespace portion::lp
