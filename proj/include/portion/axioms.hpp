#pragma once

#include <optional>
#include <string>
#include <vector>

#include "portion/model.hpp"
#include "portion/rules.hpp"

namespace portion::axioms {

enum class AxiomId {
    ParetoOptimality,
    RangeRespect,
    ScoreUnanimity,
    ScoreRepresentation,
    SingleMindedProportionality,
    Independence,
    ScoreMonotonicity,
    Reinforcement,
    Strategyproofness,
    Participation,
};

constexpr AxiomId kAllAxioms[] = {
    AxiomId::ParetoOptimality,   AxiomId::RangeRespect,
    AxiomId::ScoreUnanimity,     AxiomId::ScoreRepresentation,
    AxiomId::SingleMindedProportionality,
    AxiomId::Independence,       AxiomId::ScoreMonotonicity,
    AxiomId::Reinforcement,      AxiomId::Strategyproofness,
    AxiomId::Participation,
};

const char* axiom_name(AxiomId a);
std::optional<AxiomId> axiom_from_name(const std::string& name);

/// Input shape: one instance, an instance pair, or instance plus removed agent.
enum class AxiomArity { Single, Pair, Removal };
AxiomArity axiom_arity(AxiomId a);

/// A replayable refutation: the instance(s), the indices involved, and the
/// failed inequality with exact values on both sides.
struct Witness {
    AxiomId axiom;
    rules::RuleId rule;
    std::vector<Instance> instances;
    std::optional<std::size_t> agent;      // 0-based internally
    std::optional<std::size_t> candidate;  // 0-based internally
    std::string relation;                  // relation that was required but failed
    Rational lhs, rhs;
    std::optional<Rational> gamma;                   // score-representation threshold
    std::optional<std::vector<Rational>> dominator;  // Pareto improvements
    std::string note;

    std::string to_json() const;
};

struct CheckResult {
    bool pass = true;
    bool vacuous = false;  // precondition of the axiom was not met
    std::optional<Witness> witness;

    static CheckResult ok() { return {}; }
    static CheckResult vacuous_pass() { return {true, true, std::nullopt}; }
    static CheckResult fail(Witness w) { return {false, false, std::move(w)}; }
};

// Strict violations on approximate (geometric-mean) outcomes must clear this
// margin to be reported; exact rules are checked at tolerance zero.
Rational approx_margin();

/// Direct per-outcome checks: range-respect, score-unanimity,
/// score-representation (thresholds range over realized column scores), and
/// single-minded proportionality (vacuous unless all agents are single-minded).
CheckResult check_single(AxiomId axiom, rules::RuleId rule, const Instance& inst,
                         const Outcome& x);

CheckResult check_pareto(rules::RuleId rule, const Instance& inst, const Outcome& x);

struct PairContext {
    std::optional<std::size_t> agent;
    std::optional<std::size_t> candidate;
};

/// Pair axioms: independence (shared column), score-monotonicity (one agent
/// raises one candidate), strategyproofness (one manipulator), reinforcement
/// (equal outcomes precondition; vacuous pass when it fails). The structural
/// precondition is verified, not constructed; BadPairContext otherwise.
CheckResult check_pair(AxiomId axiom, rules::RuleId rule, const Instance& a,
                       const Instance& b, const PairContext& ctx);

CheckResult check_participation(rules::RuleId rule, const Instance& inst, std::size_t agent);

/// Re-runs the stored check; true iff the violation reproduces.
bool replay(const Witness& w);

/// Cross-checks the efficiency-axiom implications on one (instance, outcome):
/// Pareto optimality => range-respect => score-unanimity, and for m=2 or n=2
/// range-respect => Pareto optimality. Any inconsistency among the checkers
/// is reported as a checker bug.
struct ImplicationReport {
    CheckResult pareto, range_respect, score_unanimity;
    bool consistent = true;
    std::vector<std::string> issues;
};
ImplicationReport implication_suite(rules::RuleId rule, const Instance& inst, const Outcome& x);

}  // namespace portion::axioms
