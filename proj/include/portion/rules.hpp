#pragma once

#include <optional>
#include <string>

#include "portion/model.hpp"

namespace portion::rules {

enum class RuleId { Avg, Max, Min, Med, Geo, Util, Egal, IM };

constexpr RuleId kAllRules[] = {RuleId::Avg, RuleId::Max, RuleId::Min, RuleId::Med,
                                RuleId::Geo, RuleId::Util, RuleId::Egal, RuleId::IM};

/// Stable lowercase names used by the CLI and JSON formats.
const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& name);

/// Only the geometric-mean rule produces approximate outcomes.
bool rule_is_exact(RuleId r);

enum class Aggregator { Avg, Max, Min, Med, Geo };

/// n+1 weakly increasing phantom functions on [0,1]. Apart from the constant
/// zero phantom, each runs from 0 to 1.
struct PhantomSystem {
    std::size_t n = 0;
    std::vector<PiecewiseLinear> phantoms;

    static PhantomSystem independent_markets(std::size_t n);
    static PhantomSystem utilitarian_ladder(std::size_t n);

    void validate() const;
};

struct MovingPhantomResult {
    Rational t_star;
    Outcome outcome;
    PiecewiseLinear median_sum;  // t -> sum of per-candidate medians
};

/// Per candidate, the median of the column scores and the n+1 phantom values
/// as an exact piecewise-linear function of t; sums them and returns the
/// smallest t* where the sum reaches 1 together with the medians at t*.
MovingPhantomResult moving_phantoms(const PhantomSystem& ps, const Instance& inst);

/// Column aggregation followed by normalization; an all-zero aggregate vector
/// yields the uniform outcome. Geo goes through geo() instead.
Outcome coordinatewise(Aggregator f, const Instance& inst);

/// Geometric-mean rule: column aggregate (prod_i s_ij)^(1/n) at BigFloat
/// precision; a zero anywhere in a column zeroes that aggregate exactly.
Outcome geo(const Instance& inst);

/// Uniform evaluator. A single-agent instance returns that agent's report
/// for every rule.
Outcome evaluate(RuleId rule, const Instance& inst);

namespace detail {

/// Column-level fast kernels for the two shipped phantom families
/// (columns[j][i] = agent i's score for candidate j, all on the simplex).
/// Throw SmallRatOverflow when values do not fit 64-bit rationals.
std::vector<Rat64> phantom_medians_im(const std::vector<std::vector<Rat64>>& columns);
std::vector<Rat64> phantom_medians_ladder(const std::vector<std::vector<Rat64>>& columns);

}  // namespace detail

}  // namespace portion::rules
