#pragma once

#include <optional>
#include <string>
#include <vector>

#include "portion/model.hpp"
#include "portion/numeric.hpp"

namespace portion::lp {

enum class Relation { LessEq, Equal, GreaterEq };

/// min/max of a linear objective over {v >= 0 : rows hold}. All data exact.
struct LinearProgram {
    std::size_t num_vars = 0;
    bool maximize = false;
    std::vector<Rational> objective;  // length num_vars

    struct Row {
        std::vector<Rational> coeffs;  // length num_vars
        Relation rel = Relation::LessEq;
        Rational rhs;
    };
    std::vector<Row> rows;
    std::vector<std::string> var_names;  // optional, used by the text dump
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> values;  // defined when Optimal
    Rational objective;            // exact optimum when Optimal
};

/// Two-phase primal simplex over exact rationals, Bland's pivot rule.
/// Deterministic for a fixed program; every returned assignment satisfies
/// all rows exactly.
LpSolution solve_lp(const LinearProgram& p);

/// Debug dump in LP text format for external cross-checking.
std::string to_lp_format(const LinearProgram& p, const std::string& name = "portion");

// ---------------------------------------------------------------------------
// Disutility profiles
// ---------------------------------------------------------------------------

/// All agents' disutilities for x, sorted nonincreasing.
std::vector<Rational> disutility_profile(const Instance& inst,
                                         const std::vector<Rational>& x);

/// Strict lexicographic order on equal-length vectors.
bool lex_less(const std::vector<Rational>& a, const std::vector<Rational>& b);

// ---------------------------------------------------------------------------
// Welfare procedures
// ---------------------------------------------------------------------------

/// Leximin-optimal outcome. n = 1 returns the row, n = 2 the coordinate
/// average (which is always leximin-optimal in that case). For n >= 3 the
/// sorted disutility profile is lexicographically minimized; remaining ties
/// are broken by smallest l1 distance to the coordinate average and then by
/// the lexicographically smallest outcome vector.
Outcome egal_leximin(const Instance& inst);

struct ParetoImprovement {
    std::vector<Rational> dominator;
    std::vector<Rational> old_disutilities;
    std::vector<Rational> new_disutilities;
};

/// Empty when x is Pareto optimal; otherwise an outcome that weakly improves
/// every agent and strictly improves at least one.
std::optional<ParetoImprovement> pareto_dominated(const Instance& inst,
                                                  const std::vector<Rational>& x);

/// Minimum achievable total disutility (utilitarian optimum).
Rational min_total_disutility(const Instance& inst);

/// Normative utilitarian rule: minimize total disutility, then pick the
/// optimal-face point closest (squared Euclidean distance) to uniform.
/// Both stages are exact; this is the reference route the phantom-ladder
/// implementation is validated against.
Outcome util_two_stage(const Instance& inst);

/// The utilitarian optimal face, as per-coordinate bounds whose box
/// intersected with the simplex hyperplane equals the face.
struct OptimalFace {
    std::vector<Rational> lower;
    std::vector<Rational> upper;
    Rational welfare;  // minimum total disutility
};
OptimalFace util_optimal_face(const Instance& inst);

// ---------------------------------------------------------------------------
// Literal dense formulations (reference routes for cross-checking)
// ---------------------------------------------------------------------------

/// min xi subject to sum(x)=1, x>=0, z_{i,j} >= |s_{i,j}-x_j| linearized,
/// sum_j z_{i,j} <= xi. Variables: x(m), z(n*m), xi.
LinearProgram build_minmax_program(const Instance& inst);

/// min sum z subject to the same linearization plus per-agent caps
/// sum_j z_{i,j} <= d_i(x0).
LinearProgram build_pareto_program(const Instance& inst, const std::vector<Rational>& x0);

/// Reference minmax value computed through build_minmax_program.
Rational minmax_disutility_dense(const Instance& inst);

/// Minmax value via the cut engine (the production route).
Rational minmax_disutility(const Instance& inst);

}  // namespace portion::lp
