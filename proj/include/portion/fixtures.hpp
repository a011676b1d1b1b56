#pragma once

#include <functional>
#include <optional>
#include <string>

#include "portion/model.hpp"
#include "portion/rules.hpp"

namespace portion::fixtures {

/// A registered worked instance. Most are parameterized by the agent count;
/// `second` holds the counterpart of pair fixtures (a misreport profile or an
/// independence partner) and the context indices say which agent deviates or
/// which candidate column is shared.
struct Fixture {
    std::string id;
    std::string note;
    std::size_t default_n;
    std::function<bool(std::size_t)> n_valid;
    std::function<Instance(std::size_t)> build;
    std::function<Instance(std::size_t)> second;   // may be empty
    std::optional<std::size_t> context_agent;      // 0-based
    std::optional<std::size_t> context_candidate;  // 0-based

    bool has_second() const { return static_cast<bool>(second); }
};

const std::vector<Fixture>& all_fixtures();

/// Lookup by id; unknown ids raise NoExpectation.
const Fixture& get(const std::string& id);

/// Builds a fixture instance; n defaults to the fixture's canonical size.
Instance build(const std::string& id, std::optional<std::size_t> n = std::nullopt);

/// The exact outcome recorded for (fixture, rule) at the given n, when one is
/// known. Approximate rules record the exact limit point; compare within
/// tolerance.
std::optional<std::vector<Rational>> expected_outcome(const std::string& id, rules::RuleId rule,
                                                      std::size_t n);

}  // namespace portion::fixtures
