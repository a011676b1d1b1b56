#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <tuple>

#include "portion/axioms.hpp"
#include "portion/model.hpp"

namespace portion::search {

/// Deterministic search parameters. Identical configs reproduce identical
/// traces; `trials` is a budget of rule evaluations so that comparisons
/// across rules are fair.
struct SearchConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 10000;
    std::size_t m_min = 2, m_max = 5;
    std::size_t n_min = 2, n_max = 8;
    long grid = 20;                          // scores move in steps of 1/grid
    std::size_t manipulation_budget = 500;   // misreports per (instance, agent)
};

/// mt19937_64 with a portable bounded draw (rejection sampling), so traces
/// are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::uint64_t next() { return gen_(); }
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 gen_;
};

/// Uniform row over {k/grid vectors summing to 1} via random compositions.
std::vector<Rational> sample_row(Rng& rng, std::size_t m, long grid);
Instance sample_instance(Rng& rng, std::size_t m, std::size_t n, long grid);
Instance sample_instance(const SearchConfig& cfg, Rng& rng);

/// Hunts for a beneficial misreport by agent `agent`: single-step mass moves
/// on the 1/grid lattice around the current report (hill climbing on the
/// truthful-disutility drop) with random restarts. `budget` counts candidate
/// misreport evaluations. Improvements must be strict; against approximate
/// outcomes they must clear the 2^-48 margin.
std::optional<axioms::Witness> find_manipulation(rules::RuleId rule, const Instance& inst,
                                                 std::size_t agent, std::size_t budget, long grid,
                                                 Rng& rng, std::size_t* evals_used = nullptr);

struct SearchOutcome {
    std::optional<axioms::Witness> witness;
    std::size_t evaluations = 0;
    std::size_t trials_run = 0;
};

/// Generates the structure each axiom needs (perturbation pairs, agent
/// removals, misreports), runs the checkers, and returns the first witness
/// found within the evaluation budget.
SearchOutcome find_axiom_violation(rules::RuleId rule, axioms::AxiomId axiom,
                                   const SearchConfig& cfg);

enum class FamilyStep { Step1, Step2, Step3 };

/// Instance families from the average-rule characterization arguments,
/// usable as adversarial fixtures. `independence_pairs` lists (a, b, column)
/// triples of family members that agree on a column, following the proof's
/// chaining.
struct CharacterizationFamily {
    std::vector<Instance> instances;
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> independence_pairs;
};

CharacterizationFamily characterization_family(FamilyStep step, std::size_t n, std::size_t m,
                                               const Rational& gamma);

/// Search report: config echo, budget spent, witness or null, wall time.
std::string report_json(rules::RuleId rule, axioms::AxiomId axiom, const SearchConfig& cfg,
                        const SearchOutcome& outcome, double wall_seconds);

}  // namespace portion::search
