#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "portion/numeric.hpp"

namespace portion {

/// One agent's reported ideal division: m nonnegative rationals summing to 1.
/// Constructors validate membership in the simplex; nothing is renormalized.
class ScoreVector {
public:
    explicit ScoreVector(std::vector<Rational> entries);

    std::size_t size() const { return entries_.size(); }
    const Rational& operator[](std::size_t j) const { return entries_[j]; }
    const std::vector<Rational>& entries() const { return entries_; }

    friend bool operator==(const ScoreVector& a, const ScoreVector& b) {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Rational> entries_;
};

/// A profile of agent reports over a fixed candidate set.
class Instance {
public:
    Instance(std::size_t m, std::vector<ScoreVector> rows);

    std::size_t m() const { return m_; }
    std::size_t n() const { return rows_.size(); }
    const ScoreVector& row(std::size_t i) const;
    const std::vector<ScoreVector>& rows() const { return rows_; }
    const Rational& score(std::size_t i, std::size_t j) const;

    /// Column j as a multiset of scores.
    std::vector<Rational> column(std::size_t j) const;

    std::string canonical_key() const;

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.m_ == b.m_ && a.rows_ == b.rows_;
    }

private:
    std::size_t m_;
    std::vector<ScoreVector> rows_;
};

/// A division of the resource. Exact outcomes carry rationals summing to
/// exactly 1; approximate outcomes (geometric mean) carry BigFloats whose sum
/// is within 2^-64 of 1.
class Outcome {
public:
    static Outcome exact(std::vector<Rational> entries);
    static Outcome approximate(std::vector<BigFloat> entries);

    bool is_exact() const { return exact_; }
    std::size_t size() const { return exact_ ? rats_.size() : floats_.size(); }

    const std::vector<Rational>& rationals() const;
    const std::vector<BigFloat>& floats() const;

    /// Entry as a BigFloat regardless of representation.
    BigFloat entry_f(std::size_t j) const;

    /// Exact entries, or a nearby rational point of the simplex when
    /// approximate (error per coordinate below 2^-120).
    std::vector<Rational> as_rationals() const;

    /// Componentwise equality; approximate outcomes compare within tol.
    bool approx_equals(const Outcome& other, const Rational& tol) const;

private:
    bool exact_ = true;
    std::vector<Rational> rats_;
    std::vector<BigFloat> floats_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// l1 distance between a report and an exact outcome; lies in [0, 2].
Rational disutility(const ScoreVector& s, const std::vector<Rational>& x);
Rational disutility(const ScoreVector& s, const Outcome& x);  // requires exact
BigFloat disutility_f(const ScoreVector& s, const Outcome& x);

/// |{i : s_{i,j} >= gamma}|.
std::size_t count_at_least(const Instance& inst, std::size_t j, const Rational& gamma);

/// True iff every agent puts the full unit on a single candidate.
bool is_single_minded(const Instance& inst);

Instance concat(const Instance& a, const Instance& b);
Instance remove_agent(const Instance& a, std::size_t i);
Instance permute_agents(const Instance& a, const std::vector<std::size_t>& perm);

// ---------------------------------------------------------------------------
// JSON (nlohmann) text formats; rationals round-trip bit-exactly.
// ---------------------------------------------------------------------------

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
std::string outcome_to_json(const Outcome& out);
Outcome outcome_from_json(const std::string& text);

}  // namespace portion
