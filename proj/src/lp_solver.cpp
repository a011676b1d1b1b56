#include "portion/lp.hpp"

#include <cassert>
#include <sstream>

namespace portion::lp {

namespace {

// Dense simplex tableau. Columns: structural vars, then one slack per
// inequality row, then artificials, then rhs. Row `rows()` is the objective
// (reduced costs; rhs cell holds minus the current objective value).
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows + 1, std::vector<Rational>(cols + 1)) {}

    Rational& at(std::size_t i, std::size_t j) { return a_[i][j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a_[i][j]; }
    Rational& rhs(std::size_t i) { return a_[i][cols_]; }
    Rational& obj(std::size_t j) { return a_[rows_][j]; }
    Rational& obj_rhs() { return a_[rows_][cols_]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = a_[r][c];
        for (auto& v : a_[r]) v /= p;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r) continue;
            Rational f = a_[i][c];
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) {
                if (sgn(a_[r][j]) == 0) continue;
                a_[i][j] -= f * a_[r][j];
            }
        }
    }

private:
    std::size_t rows_, cols_;
    std::vector<std::vector<Rational>> a_;
};

enum class PivotOutcome { Optimal, Unbounded };

// Bland's rule: entering = smallest-index column with negative reduced cost;
// leaving = min-ratio row, ties by smallest basic variable index.
PivotOutcome run_simplex(Tableau& t, std::vector<std::size_t>& basis,
                         const std::vector<bool>& usable) {
    for (;;) {
        std::size_t enter = t.cols();
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (!usable[j]) continue;
            if (sgn(t.obj(j)) < 0) { enter = j; break; }
        }
        if (enter == t.cols()) return PivotOutcome::Optimal;

        std::size_t leave = t.rows();
        Rational best_ratio;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (sgn(t.at(i, enter)) <= 0) continue;
            Rational ratio = t.rhs(i) / t.at(i, enter);
            if (leave == t.rows() || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == t.rows()) return PivotOutcome::Unbounded;

        t.pivot(leave, enter);
        basis[leave] = enter;
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& p) {
    const std::size_t n = p.num_vars;
    if (p.objective.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "objective length mismatch");
    for (const auto& r : p.rows)
        if (r.coeffs.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "constraint length mismatch");

    const std::size_t m = p.rows.size();
    std::size_t num_slacks = 0;
    for (const auto& r : p.rows)
        if (r.rel != Relation::Equal) ++num_slacks;

    // columns: [vars | slacks | artificials]
    const std::size_t first_slack = n;
    const std::size_t first_art = n + num_slacks;
    const std::size_t cols = n + num_slacks + m;  // worst case one artificial per row

    Tableau t(m, cols);
    std::vector<std::size_t> basis(m, cols);
    std::vector<bool> usable(cols, false);
    for (std::size_t j = 0; j < first_art; ++j) usable[j] = true;

    std::size_t slack_idx = first_slack;
    std::size_t art_idx = first_art;
    std::size_t num_art = 0;

    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = p.rows[i];
        int flip = sgn(r.rhs) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip * r.coeffs[j];
        t.rhs(i) = flip * r.rhs;
        Rational slack_coeff = 0;
        if (r.rel == Relation::LessEq) slack_coeff = flip;
        else if (r.rel == Relation::GreaterEq) slack_coeff = -flip;
        if (r.rel != Relation::Equal) t.at(i, slack_idx) = slack_coeff;

        if (r.rel != Relation::Equal && slack_coeff == 1) {
            basis[i] = slack_idx;  // slack serves as initial basic
        } else {
            t.at(i, art_idx) = 1;
            basis[i] = art_idx;
            ++art_idx;
            ++num_art;
        }
        if (r.rel != Relation::Equal) ++slack_idx;
    }

    // Phase 1: minimize the sum of artificials.
    if (num_art > 0) {
        std::vector<bool> usable1(cols, false);
        for (std::size_t j = 0; j < first_art; ++j) usable1[j] = true;
        for (std::size_t j = first_art; j < art_idx; ++j) usable1[j] = true;
        for (std::size_t j = first_art; j < art_idx; ++j) t.obj(j) = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] >= first_art) {
                for (std::size_t j = 0; j <= cols; ++j) t.at(m, j) -= t.at(i, j);
                // obj row index m == t.rows(); use explicit loop above
            }
        }
        PivotOutcome r1 = run_simplex(t, basis, usable1);
        (void)r1;  // phase 1 is bounded below by zero
        if (sgn(t.obj_rhs()) != 0) {
            LpSolution s;
            s.status = LpStatus::Infeasible;
            return s;
        }
        // drive remaining artificials out of the basis
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < first_art) continue;
            std::size_t piv = cols;
            for (std::size_t j = 0; j < first_art; ++j) {
                if (sgn(t.at(i, j)) != 0) { piv = j; break; }
            }
            if (piv == cols) {
                basis[i] = cols;  // redundant row; keep inert
                continue;
            }
            t.pivot(i, piv);
            basis[i] = piv;
        }
        for (std::size_t j = first_art; j < art_idx; ++j) usable[j] = false;
    }

    // Phase 2 objective: reduced costs of the original objective.
    for (std::size_t j = 0; j <= cols; ++j) t.obj(j) = 0;
    for (std::size_t j = 0; j < n; ++j)
        t.obj(j) = p.maximize ? -p.objective[j] : p.objective[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] >= cols) continue;
        Rational c = t.obj(basis[i]);
        if (sgn(c) == 0) continue;
        for (std::size_t j = 0; j <= cols; ++j) {
            if (sgn(t.at(i, j)) == 0) continue;
            t.obj(j) -= c * t.at(i, j);
        }
    }

    PivotOutcome r2 = run_simplex(t, basis, usable);
    LpSolution s;
    if (r2 == PivotOutcome::Unbounded) {
        s.status = LpStatus::Unbounded;
        return s;
    }
    s.status = LpStatus::Optimal;
    s.values.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) s.values[basis[i]] = t.rhs(i);
    Rational obj = 0;
    for (std::size_t j = 0; j < n; ++j) obj += p.objective[j] * s.values[j];
    s.objective = obj;
    return s;
}

std::string to_lp_format(const LinearProgram& p, const std::string& name) {
    auto var = [&](std::size_t j) {
        if (j < p.var_names.size() && !p.var_names[j].empty()) return p.var_names[j];
        return "v" + std::to_string(j);
    };
    auto term = [&](const Rational& c, std::size_t j, bool first) {
        std::ostringstream os;
        if (sgn(c) >= 0 && !first) os << " + ";
        else if (sgn(c) < 0) os << (first ? "- " : " - ");
        Rational a = abs(c);
        if (a != 1) os << render_rational(a) << " ";
        os << var(j);
        return os.str();
    };
    std::ostringstream os;
    os << "\\ " << name << "\n" << (p.maximize ? "Maximize" : "Minimize") << "\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (sgn(p.objective[j]) == 0) continue;
        os << " " << term(p.objective[j], j, first);
        first = false;
    }
    if (first) os << " 0 " << var(0);
    os << "\nSubject To\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        os << " c" << i << ":";
        bool f = true;
        for (std::size_t j = 0; j < p.num_vars; ++j) {
            if (sgn(p.rows[i].coeffs[j]) == 0) continue;
            os << " " << term(p.rows[i].coeffs[j], j, f);
            f = false;
        }
        if (f) os << " 0 " << var(0);
        const char* rel = p.rows[i].rel == Relation::LessEq    ? "<="
                          : p.rows[i].rel == Relation::Equal   ? "="
                                                               : ">=";
        os << " " << rel << " " << render_rational(p.rows[i].rhs) << "\n";
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < p.num_vars; ++j) os << " 0 <= " << var(j) << "\n";
    os << "End\n";
    return os.str();
}

std::vector<Rational> disutility_profile(const Instance& inst,
                                         const std::vector<Rational>& x) {
    std::vector<Rational> d;
    d.reserve(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) d.push_back(disutility(inst.row(i), x));
    std::sort(d.begin(), d.end(), [](const Rational& a, const Rational& b) { return b < a; });
    return d;
}

bool lex_less(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i] < b[i]) return true;
        if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
}

}  // namespace portion::lp
