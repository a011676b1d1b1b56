#include "portion/model.hpp"

#include <json.hpp>

#include <sstream>

namespace portion {

using nlohmann::json;

ScoreVector::ScoreVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "score vector needs at least two candidates");
    Rational sum = 0;
    for (const auto& e : entries_) {
        if (sgn(e) < 0)
            throw Error(ErrorCode::InvalidArgument, "negative score");
        sum += e;
    }
    if (sum != 1)
        throw Error(ErrorCode::InvalidArgument,
                    "scores must sum to exactly 1, got " + render_rational(sum));
}

Instance::Instance(std::size_t m, std::vector<ScoreVector> rows)
    : m_(m), rows_(std::move(rows)) {
    if (m_ < 2) throw Error(ErrorCode::InvalidArgument, "need at least two candidates");
    if (rows_.empty()) throw Error(ErrorCode::EmptyInstance, "instance needs at least one agent");
    for (const auto& r : rows_)
        if (r.size() != m_)
            throw Error(ErrorCode::DimensionMismatch, "row length differs from candidate count");
}

const ScoreVector& Instance::row(std::size_t i) const {
    if (i >= rows_.size()) throw Error(ErrorCode::BadIndex, "agent index out of range");
    return rows_[i];
}

const Rational& Instance::score(std::size_t i, std::size_t j) const {
    if (i >= rows_.size() || j >= m_) throw Error(ErrorCode::BadIndex, "index out of range");
    return rows_[i][j];
}

std::vector<Rational> Instance::column(std::size_t j) const {
    if (j >= m_) throw Error(ErrorCode::BadIndex, "candidate index out of range");
    std::vector<Rational> col;
    col.reserve(rows_.size());
    for (const auto& r : rows_) col.push_back(r[j]);
    return col;
}

std::string Instance::canonical_key() const {
    std::ostringstream os;
    os << m_ << '#';
    for (const auto& r : rows_) {
        for (const auto& e : r.entries()) os << render_rational(e) << ',';
        os << ';';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Outcome
// ---------------------------------------------------------------------------

Outcome Outcome::exact(std::vector<Rational> entries) {
    Outcome o;
    o.exact_ = true;
    Rational sum = 0;
    for (const auto& e : entries) {
        if (sgn(e) < 0) throw Error(ErrorCode::InvalidArgument, "negative outcome entry");
        sum += e;
    }
    if (sum != 1)
        throw Error(ErrorCode::InvalidArgument,
                    "outcome must sum to exactly 1, got " + render_rational(sum));
    o.rats_ = std::move(entries);
    return o;
}

Outcome Outcome::approximate(std::vector<BigFloat> entries) {
    Outcome o;
    o.exact_ = false;
    BigFloat sum;
    for (const auto& e : entries) sum = sum + e;
    BigFloat tol(pow2_inverse(64));
    if ((sum - BigFloat(1L)).abs() > tol)
        throw Error(ErrorCode::InvalidArgument, "approximate outcome sum too far from 1");
    o.floats_ = std::move(entries);
    return o;
}

const std::vector<Rational>& Outcome::rationals() const {
    if (!exact_) throw Error(ErrorCode::InvalidArgument, "outcome is approximate");
    return rats_;
}

const std::vector<BigFloat>& Outcome::floats() const {
    if (exact_) throw Error(ErrorCode::InvalidArgument, "outcome is exact");
    return floats_;
}

BigFloat Outcome::entry_f(std::size_t j) const {
    if (j >= size()) throw Error(ErrorCode::BadIndex, "outcome index out of range");
    return exact_ ? BigFloat(rats_[j]) : floats_[j];
}

std::vector<Rational> Outcome::as_rationals() const {
    if (exact_) return rats_;
    // round each coordinate, then repair the last so the sum is exactly 1
    std::vector<Rational> out;
    out.reserve(floats_.size());
    Rational sum = 0;
    for (const auto& f : floats_) {
        Rational q = f.to_rational_approx();
        if (sgn(q) < 0) q = 0;
        out.push_back(q);
        sum += q;
    }
    Rational excess = sum - 1;
    for (auto it = out.rbegin(); it != out.rend() && excess != 0; ++it) {
        Rational take = std::min(*it, excess);
        if (excess > 0) {
            *it -= take;
            excess -= take;
        } else {
            *it -= excess;
            excess = 0;
        }
    }
    return out;
}

bool Outcome::approx_equals(const Outcome& other, const Rational& tol) const {
    if (size() != other.size()) return false;
    if (exact_ && other.exact_) return rats_ == other.rats_;
    BigFloat t{tol};
    for (std::size_t j = 0; j < size(); ++j)
        if ((entry_f(j) - other.entry_f(j)).abs() > t) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Rational disutility(const ScoreVector& s, const std::vector<Rational>& x) {
    if (s.size() != x.size())
        throw Error(ErrorCode::DimensionMismatch, "disutility length mismatch");
    Rational d = 0;
    for (std::size_t j = 0; j < x.size(); ++j) d += abs(s[j] - x[j]);
    return d;
}

Rational disutility(const ScoreVector& s, const Outcome& x) {
    return disutility(s, x.rationals());
}

BigFloat disutility_f(const ScoreVector& s, const Outcome& x) {
    if (s.size() != x.size())
        throw Error(ErrorCode::DimensionMismatch, "disutility length mismatch");
    BigFloat d;
    for (std::size_t j = 0; j < x.size(); ++j) d = d + (BigFloat(s[j]) - x.entry_f(j)).abs();
    return d;
}

std::size_t count_at_least(const Instance& inst, std::size_t j, const Rational& gamma) {
    if (j >= inst.m()) throw Error(ErrorCode::BadIndex, "candidate index out of range");
    std::size_t c = 0;
    for (std::size_t i = 0; i < inst.n(); ++i)
        if (inst.score(i, j) >= gamma) ++c;
    return c;
}

bool is_single_minded(const Instance& inst) {
    for (const auto& r : inst.rows()) {
        bool has_one = false;
        for (const auto& e : r.entries())
            if (e == 1) has_one = true;
        if (!has_one) return false;
    }
    return true;
}

Instance concat(const Instance& a, const Instance& b) {
    if (a.m() != b.m())
        throw Error(ErrorCode::DimensionMismatch, "concat with different candidate counts");
    std::vector<ScoreVector> rows = a.rows();
    rows.insert(rows.end(), b.rows().begin(), b.rows().end());
    return Instance(a.m(), std::move(rows));
}

Instance remove_agent(const Instance& a, std::size_t i) {
    if (i >= a.n()) throw Error(ErrorCode::BadIndex, "agent index out of range");
    if (a.n() == 1) throw Error(ErrorCode::EmptyInstance, "cannot remove the last agent");
    std::vector<ScoreVector> rows;
    rows.reserve(a.n() - 1);
    for (std::size_t k = 0; k < a.n(); ++k)
        if (k != i) rows.push_back(a.row(k));
    return Instance(a.m(), std::move(rows));
}

Instance permute_agents(const Instance& a, const std::vector<std::size_t>& perm) {
    if (perm.size() != a.n())
        throw Error(ErrorCode::BadIndex, "permutation length differs from agent count");
    std::vector<bool> seen(a.n(), false);
    std::vector<ScoreVector> rows;
    rows.reserve(a.n());
    for (std::size_t i = 0; i < a.n(); ++i) {
        if (perm[i] >= a.n() || seen[perm[i]])
            throw Error(ErrorCode::BadIndex, "not a permutation");
        seen[perm[i]] = true;
        rows.push_back(a.row(perm[i]));
    }
    return Instance(a.m(), std::move(rows));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

std::string instance_to_json(const Instance& inst) {
    json j;
    j["m"] = inst.m();
    json agents = json::array();
    for (const auto& r : inst.rows()) {
        json row = json::array();
        for (const auto& e : r.entries()) row.push_back(render_rational(e));
        agents.push_back(row);
    }
    j["agents"] = agents;
    return j.dump();
}

Instance instance_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad instance JSON: ") + e.what());
    }
    if (!j.contains("m") || !j.contains("agents"))
        throw Error(ErrorCode::ParseError, "instance JSON needs \"m\" and \"agents\"");
    std::size_t m = j["m"].get<std::size_t>();
    std::vector<ScoreVector> rows;
    for (const auto& row : j["agents"]) {
        std::vector<Rational> entries;
        for (const auto& cell : row) entries.push_back(parse_rational(cell.get<std::string>()));
        rows.emplace_back(std::move(entries));
    }
    return Instance(m, std::move(rows));
}

std::string outcome_to_json(const Outcome& out) {
    json j;
    j["m"] = out.size();
    j["exact"] = out.is_exact();
    json entries = json::array();
    if (out.is_exact()) {
        for (const auto& e : out.rationals()) entries.push_back(render_rational(e));
    } else {
        for (const auto& f : out.floats()) entries.push_back(f.str(45));
    }
    j["entries"] = entries;
    json dec = json::array();
    for (std::size_t k = 0; k < out.size(); ++k) dec.push_back(out.entry_f(k).to_double());
    j["decimal"] = dec;
    return j.dump();
}

Outcome outcome_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad outcome JSON: ") + e.what());
    }
    if (!j.contains("entries")) throw Error(ErrorCode::ParseError, "outcome JSON needs \"entries\"");
    bool exact = j.value("exact", true);
    if (!exact)
        throw Error(ErrorCode::ParseError, "only exact outcomes can be read back");
    std::vector<Rational> entries;
    for (const auto& cell : j["entries"]) entries.push_back(parse_rational(cell.get<std::string>()));
    return Outcome::exact(std::move(entries));
}

}  // namespace portion
