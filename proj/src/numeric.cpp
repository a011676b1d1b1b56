#include "portion/numeric.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

namespace portion {

// ---------------------------------------------------------------------------
// Rational parsing / rendering
// ---------------------------------------------------------------------------

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational literal");

    auto check_int = [&](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        return true;
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!check_int(num) || !check_int(den))
            throw Error(ErrorCode::ParseError, "bad rational literal: " + text);
        mpz_class nz(num), dz(den);
        if (dz == 0) throw Error(ErrorCode::ParseError, "zero denominator: " + text);
        Rational q{nz, dz};
        q.canonicalize();
        return q;
    }

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string ipart = s.substr(0, dot), fpart = s.substr(dot + 1);
        bool neg = !ipart.empty() && ipart[0] == '-';
        if (!ipart.empty() && (ipart[0] == '-' || ipart[0] == '+')) ipart = ipart.substr(1);
        if (ipart.empty()) ipart = "0";
        if (!check_int(ipart) || (!fpart.empty() && !check_int(fpart)))
            throw Error(ErrorCode::ParseError, "bad decimal literal: " + text);
        mpz_class scale = 1;
        for (std::size_t i = 0; i < fpart.size(); ++i) scale *= 10;
        mpz_class whole(ipart);
        mpz_class frac = fpart.empty() ? mpz_class(0) : mpz_class(fpart);
        Rational q(whole * scale + frac, scale);
        q.canonicalize();
        if (neg) q = -q;
        return q;
    }

    if (!check_int(s)) throw Error(ErrorCode::ParseError, "bad rational literal: " + text);
    return Rational(mpz_class(s));
}

std::string render_rational(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow2_inverse(unsigned k) {
    mpz_class den = 1;
    den <<= k;
    Rational q(1, den);
    q.canonicalize();
    return q;
}

// ---------------------------------------------------------------------------
// Rat64
// ---------------------------------------------------------------------------

namespace {

using i64 = std::int64_t;
using i128 = __int128;

constexpr i64 kRatLimit = i64(1) << 62;

i64 narrow(i128 v) {
    if (v > i128(kRatLimit) || v < -i128(kRatLimit)) throw SmallRatOverflow{};
    return static_cast<i64>(v);
}

i64 gcd64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return std::gcd(a, b);
}

Rat64 make_canonical(i128 num, i128 den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "Rat64 zero denominator");
    if (den < 0) { num = -num; den = -den; }
    if (num == 0) return Rat64(0);
    i128 a = num < 0 ? -num : num, b = den;
    while (b) { i128 t = a % b; a = b; b = t; }
    num /= a;
    den /= a;
    Rat64 r;
    r.num = narrow(num);
    r.den = narrow(den);
    return r;
}

}  // namespace

Rat64::Rat64(i64 n, i64 d) { *this = make_canonical(n, d); }

Rat64 Rat64::from(const Rational& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw SmallRatOverflow{};
    i64 n = q.get_num().get_si(), d = q.get_den().get_si();
    if (n > kRatLimit || n < -kRatLimit || d > kRatLimit) throw SmallRatOverflow{};
    Rat64 r;
    r.num = n;
    r.den = d;
    return r;
}

Rational Rat64::to_rational() const {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

Rat64 operator+(const Rat64& a, const Rat64& b) {
    return make_canonical(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
}

Rat64 operator-(const Rat64& a, const Rat64& b) {
    return make_canonical(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
}

Rat64 operator*(const Rat64& a, const Rat64& b) {
    // cross-reduce first so intermediates stay small
    i64 g1 = gcd64(a.num, b.den), g2 = gcd64(b.num, a.den);
    i128 num = i128(a.num / g1) * (b.num / g2);
    i128 den = i128(a.den / g2) * (b.den / g1);
    Rat64 r;
    r.num = narrow(num);
    r.den = narrow(den);
    return r;
}

Rat64 operator/(const Rat64& a, const Rat64& b) {
    if (b.num == 0) throw Error(ErrorCode::InvalidArgument, "Rat64 division by zero");
    i64 g1 = gcd64(a.num, b.num), g2 = gcd64(b.den, a.den);
    i128 num = i128(a.num / g1) * (b.den / g2);
    i128 den = i128(a.den / g2) * (b.num / g1);
    if (den < 0) { num = -num; den = -den; }
    Rat64 r;
    r.num = narrow(num);
    r.den = narrow(den);
    return r;
}

bool operator<(const Rat64& a, const Rat64& b) {
    return i128(a.num) * b.den < i128(b.num) * a.den;
}

// ---------------------------------------------------------------------------
// Medians
// ---------------------------------------------------------------------------

namespace {

template <typename R>
R median_impl(std::vector<R>& v) {
    if (v.empty()) throw Error(ErrorCode::EmptyMedian, "median of empty multiset");
    std::size_t k = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + k, v.end());
    if (v.size() % 2 == 1) return v[k];
    R hi = v[k];
    R lo = *std::max_element(v.begin(), v.begin() + k);
    return (lo + hi) / R(2);
}

}  // namespace

Rational median(std::vector<Rational> values) { return median_impl(values); }

bool median_union_check(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    Rational ma = median(a), mb = median(b);
    if (ma != mb)
        throw Error(ErrorCode::MedianMismatch, "median_union_check requires equal medians");
    std::vector<Rational> u = a;
    u.insert(u.end(), b.begin(), b.end());
    return median(u) == ma;
}

// ---------------------------------------------------------------------------
// BigFloat
// ---------------------------------------------------------------------------

Rational BigFloat::to_rational_approx() const {
    mpf_t f;
    mpf_init2(f, kPrecision);
    mpfr_get_f(f, v_, MPFR_RNDN);
    Rational q;
    mpq_set_f(q.get_mpq_t(), f);
    mpf_clear(f);
    q.canonicalize();
    return q;
}

std::string BigFloat::str(int digits) const {
    char* s = nullptr;
    // mpfr_asprintf gives shortest faithful decimal at requested precision
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

BigFloat nth_root(const Rational& x, unsigned n) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "0th root");
    if (sgn(x) < 0) throw Error(ErrorCode::NegativeRoot, "nth_root of negative value");
    if (sgn(x) == 0) return BigFloat(0L);
    if (n == 1) return BigFloat(x);

    // perfect n-th power of a rational: take the exact root, round once
    mpz_class rn, rd;
    int exact_n = mpz_root(rn.get_mpz_t(), x.get_num().get_mpz_t(), n);
    if (exact_n) {
        int exact_d = mpz_root(rd.get_mpz_t(), x.get_den().get_mpz_t(), n);
        if (exact_d) {
            Rational r(rn, rd);
            r.canonicalize();
            return BigFloat(r);
        }
    }

    BigFloat r(x);
    mpfr_rootn_ui(r.raw(), r.raw(), n, MPFR_RNDN);
    return r;
}

// ---------------------------------------------------------------------------
// PiecewiseLinear
// ---------------------------------------------------------------------------

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Rational, Rational>> pts)
    : pts_(std::move(pts)) {
    if (pts_.empty())
        throw Error(ErrorCode::InvalidArgument, "piecewise-linear function needs breakpoints");
    for (std::size_t i = 1; i < pts_.size(); ++i)
        if (!(pts_[i - 1].first < pts_[i].first))
            throw Error(ErrorCode::InvalidArgument, "breakpoints must strictly increase");
}

PiecewiseLinear PiecewiseLinear::constant(const Rational& v, const Rational& t0,
                                          const Rational& t1) {
    return PiecewiseLinear({{t0, v}, {t1, v}});
}

Rational PiecewiseLinear::value(const Rational& t) const {
    if (t < pts_.front().first || t > pts_.back().first)
        throw Error(ErrorCode::InvalidArgument, "evaluation outside domain");
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t,
                               [](const auto& p, const Rational& x) { return p.first < x; });
    if (it != pts_.end() && it->first == t) return it->second;
    auto hi = it, lo = it - 1;
    Rational slope = (hi->second - lo->second) / (hi->first - lo->first);
    return lo->second + slope * (t - lo->first);
}

bool PiecewiseLinear::is_nondecreasing() const {
    for (std::size_t i = 1; i < pts_.size(); ++i)
        if (pts_[i].second < pts_[i - 1].second) return false;
    return true;
}

PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b) {
    if (a.pts_.front().first != b.pts_.front().first ||
        a.pts_.back().first != b.pts_.back().first)
        throw Error(ErrorCode::DimensionMismatch, "summing PL functions with different domains");
    std::vector<Rational> ts;
    ts.reserve(a.pts_.size() + b.pts_.size());
    for (const auto& p : a.pts_) ts.push_back(p.first);
    for (const auto& p : b.pts_) ts.push_back(p.first);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<std::pair<Rational, Rational>> pts;
    pts.reserve(ts.size());
    for (const auto& t : ts) pts.emplace_back(t, a.value(t) + b.value(t));
    return PiecewiseLinear(std::move(pts));
}

Rational solve_monotone_pwl(const PiecewiseLinear& f, const Rational& target) {
    const auto& pts = f.breakpoints();
    // first breakpoint with value >= target
    auto it = std::lower_bound(pts.begin(), pts.end(), target,
                               [](const auto& p, const Rational& x) { return p.second < x; });
    if (it == pts.end()) throw Error(ErrorCode::NoRoot, "target above range");
    if (it == pts.begin()) {
        if (it->second == target) return it->first;
        throw Error(ErrorCode::NoRoot, "target below range");
    }
    auto lo = it - 1;
    // f(lo) < target <= f(it), so the segment slope is positive
    Rational slope = (it->second - lo->second) / (it->first - lo->first);
    return lo->first + (target - lo->second) / slope;
}

}  // namespace portion
