#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "portion/errors.hpp"

namespace portion {

/// Exact rational scalar. Backed by GMP; always canonical (lowest terms,
/// positive denominator).
using Rational = mpq_class;

/// Parses "p/q", "p", or a decimal literal ("0.8" -> 4/5). Exact.
Rational parse_rational(const std::string& text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string render_rational(const Rational& q);

double to_double(const Rational& q);

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// 2^-k as an exact rational, for tolerance thresholds.
Rational pow2_inverse(unsigned k);

// ---------------------------------------------------------------------------
// Small fixed-width rational used by hot evaluation kernels. Values stay
// canonical; any intermediate that would not fit 64 bits throws
// SmallRatOverflow and the caller retries with Rational.
// ---------------------------------------------------------------------------

struct SmallRatOverflow {};

struct Rat64 {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rat64() = default;
    Rat64(std::int64_t n) : num(n), den(1) {}
    Rat64(std::int64_t n, std::int64_t d);

    static Rat64 from(const Rational& q);
    Rational to_rational() const;

    friend Rat64 operator+(const Rat64& a, const Rat64& b);
    friend Rat64 operator-(const Rat64& a, const Rat64& b);
    friend Rat64 operator*(const Rat64& a, const Rat64& b);
    friend Rat64 operator/(const Rat64& a, const Rat64& b);
    Rat64 operator-() const { return Rat64(-num, den); }

    friend bool operator==(const Rat64& a, const Rat64& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rat64& a, const Rat64& b) { return !(a == b); }
    friend bool operator<(const Rat64& a, const Rat64& b);
    friend bool operator<=(const Rat64& a, const Rat64& b) { return !(b < a); }
    friend bool operator>(const Rat64& a, const Rat64& b) { return b < a; }
    friend bool operator>=(const Rat64& a, const Rat64& b) { return !(a < b); }
};

// ---------------------------------------------------------------------------
// Medians
// ---------------------------------------------------------------------------

/// Median of a nonempty multiset: middle element for odd cardinality, exact
/// average of the two middle elements for even cardinality.
Rational median(std::vector<Rational> values);

/// Property-test oracle for the median-of-union lemma: given med(a) = med(b),
/// reports whether med(a ∪ b) equals it (always true by the lemma).
bool median_union_check(const std::vector<Rational>& a,
                        const std::vector<Rational>& b);

// ---------------------------------------------------------------------------
// BigFloat: radix-2 float with fixed 192-bit precision, round-to-nearest.
// Only needed for the geometric-mean rule, whose outputs are irrational.
// ---------------------------------------------------------------------------

class BigFloat {
public:
    static constexpr mpfr_prec_t kPrecision = 192;

    BigFloat() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
    explicit BigFloat(long x) { mpfr_init2(v_, kPrecision); mpfr_set_si(v_, x, MPFR_RNDN); }
    explicit BigFloat(const Rational& q) {
        mpfr_init2(v_, kPrecision);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, kPrecision); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, kPrecision); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    BigFloat abs() const { BigFloat r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    bool is_zero() const { return mpfr_zero_p(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Nearest rational with denominator at most 2^64 (continued fractions);
    /// used to hand approximate outcomes to the exact checkers.
    Rational to_rational_approx() const;

    std::string str(int digits = 40) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    mpfr_t v_;
};

/// x^(1/n) at BigFloat precision; exact rational roots are detected and
/// rounded once. Negative x -> NegativeRoot.
BigFloat nth_root(const Rational& x, unsigned n);

// ---------------------------------------------------------------------------
// Continuous piecewise-linear functions on [0,1] with rational breakpoints.
// ---------------------------------------------------------------------------

class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    /// Breakpoints must be strictly increasing in t and nonempty.
    explicit PiecewiseLinear(std::vector<std::pair<Rational, Rational>> pts);

    static PiecewiseLinear constant(const Rational& v, const Rational& t0,
                                    const Rational& t1);

    const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return pts_; }

    Rational domain_min() const { return pts_.front().first; }
    Rational domain_max() const { return pts_.back().first; }

    Rational value(const Rational& t) const;
    bool is_nondecreasing() const;

    friend PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b);

private:
    std::vector<std::pair<Rational, Rational>> pts_;
};

/// Smallest t with f(t) = target for nondecreasing f; NoRoot when the target
/// is outside f's range.
Rational solve_monotone_pwl(const PiecewiseLinear& f, const Rational& target);

}  // namespace portion
