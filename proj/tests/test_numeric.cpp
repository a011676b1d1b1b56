#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "portion/numeric.hpp"

using namespace portion;

TEST_CASE("rational parsing and rendering round-trips") {
    CHECK(parse_rational("4/5") == rat(4, 5));
    CHECK(parse_rational("0.8") == rat(4, 5));
    CHECK(parse_rational("-0.25") == rat(-1, 4));
    CHECK(parse_rational("7") == rat(7));
    CHECK(parse_rational(" 3 / 6 ") == rat(1, 2));
    CHECK(render_rational(rat(21, 58)) == "21/58");
    CHECK(render_rational(rat(3)) == "3");
    CHECK(render_rational(rat(-2, 4)) == "-1/2");

    auto roundtrip = [](const Rational& q) { return parse_rational(render_rational(q)); };
    for (long num = -12; num <= 12; ++num)
        for (long den = 1; den <= 9; ++den) CHECK(roundtrip(rat(num, den)) == rat(num, den));

    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("median on odd and even multisets") {
    CHECK(median({rat(1), rat(2), rat(3)}) == rat(2));
    CHECK(median({rat(0), rat(1, 5), rat(2, 5), rat(1)}) == rat(3, 10));
    // the two column medians of the combined reinforcement instance
    CHECK(median({rat(1, 2), rat(3, 8)}) == rat(7, 16));
    CHECK(median({rat(2, 3), rat(2, 3), rat(0), rat(0), rat(1, 2), rat(3, 8)}) == rat(7, 16));
    CHECK_THROWS_AS(median({}), Error);

    std::vector<Rational> v = {rat(3, 7), rat(1, 9), rat(5, 6), rat(1, 9), rat(2, 3)};
    Rational med = median(v);
    std::sort(v.begin(), v.end());
    do {
        CHECK(median(v) == med);
    } while (std::next_permutation(v.begin(), v.end()));
    CHECK(med >= *std::min_element(v.begin(), v.end()));
    CHECK(med <= *std::max_element(v.begin(), v.end()));
}

TEST_CASE("median_union_check always passes when preconditions hold") {
    CHECK(median_union_check({rat(1), rat(2), rat(3)}, {rat(2)}));
    CHECK(median_union_check({rat(0), rat(4)}, {rat(1), rat(3)}));
    CHECK(median_union_check({rat(1, 2), rat(1, 2)}, {rat(0), rat(1)}));
    CHECK_THROWS_AS(median_union_check({rat(1)}, {rat(2)}), Error);

    // randomized pairs with equal medians by construction
    std::mt19937_64 rng(7);
    auto rnd = [&] { return rat(static_cast<long>(rng() % 41), 20); };
    for (int iter = 0; iter < 2000; ++iter) {
        Rational z = rnd();
        std::vector<Rational> a{z}, b;
        std::size_t ka = rng() % 4, kb = rng() % 4;
        for (std::size_t i = 0; i < ka; ++i) {
            a.push_back(z - rnd());
            a.push_back(z + rnd());
        }
        Rational d = rnd();
        b.push_back(z - d);
        b.push_back(z + d);
        for (std::size_t i = 0; i < kb; ++i) {
            b.push_back(z - d - rnd());
            b.push_back(z + d + rnd());
        }
        CHECK(median(a) == z);
        CHECK(median(b) == z);
        CHECK(median_union_check(a, b));
    }
}

TEST_CASE("Rat64 arithmetic agrees with Rational") {
    std::mt19937_64 rng(11);
    auto rnd = [&] {
        long num = static_cast<long>(rng() % 200) - 100;
        long den = 1 + static_cast<long>(rng() % 40);
        return std::pair{rat(num, den), Rat64(num, den)};
    };
    for (int iter = 0; iter < 5000; ++iter) {
        auto [qa, ra] = rnd();
        auto [qb, rb] = rnd();
        CHECK((ra + rb).to_rational() == qa + qb);
        CHECK((ra - rb).to_rational() == qa - qb);
        CHECK((ra * rb).to_rational() == qa * qb);
        if (sgn(qb) != 0) CHECK((ra / rb).to_rational() == qa / qb);
        CHECK((ra < rb) == (qa < qb));
        CHECK((ra == rb) == (qa == qb));
    }
    CHECK_THROWS_AS(Rat64(1, 3) / Rat64(0), Error);
}

TEST_CASE("nth_root handles perfect powers, irrationals, and zero") {
    CHECK(nth_root(rat(16), 4) == BigFloat(rat(2)));
    CHECK(nth_root(rat(0), 5) == BigFloat(0L));
    CHECK(nth_root(rat(8, 27), 3) == BigFloat(rat(2, 3)));

    BigFloat r2 = nth_root(rat(2), 2);
    BigFloat err = (r2 * r2 - BigFloat(rat(2))).abs();
    CHECK(err < BigFloat(pow2_inverse(100)));

    CHECK_THROWS_AS(nth_root(rat(-1), 2), Error);
}

TEST_CASE("BigFloat rational approximation is tight") {
    BigFloat x = nth_root(rat(2), 2);
    Rational q = x.to_rational_approx();
    CHECK((BigFloat(q) - x).abs() < BigFloat(pow2_inverse(120)));
}

TEST_CASE("piecewise-linear evaluation, addition, and smallest-root solving") {
    PiecewiseLinear f({{rat(0), rat(0)}, {rat(1), rat(3)}});
    CHECK(f.value(rat(1, 3)) == rat(1));
    CHECK(solve_monotone_pwl(f, rat(1)) == rat(1, 3));

    PiecewiseLinear ramp({{rat(0), rat(0)}, {rat(1, 4), rat(1)}, {rat(1), rat(1)}});
    CHECK(solve_monotone_pwl(ramp, rat(1)) == rat(1, 4));
    CHECK(ramp.is_nondecreasing());

    PiecewiseLinear g = f + ramp;
    CHECK(g.value(rat(0)) == rat(0));
    CHECK(g.value(rat(1, 4)) == rat(3, 4) + rat(1));
    CHECK(g.value(rat(1)) == rat(4));

    CHECK_THROWS_AS(solve_monotone_pwl(f, rat(4)), Error);
    PiecewiseLinear above({{rat(0), rat(1, 2)}, {rat(1), rat(1)}});
    CHECK_THROWS_AS(solve_monotone_pwl(above, rat(1, 4)), Error);

    PiecewiseLinear flat(
        {{rat(0), rat(0)}, {rat(1, 2), rat(1)}, {rat(3, 4), rat(1)}, {rat(1), rat(2)}});
    CHECK(solve_monotone_pwl(flat, rat(1)) == rat(1, 2));
}

TEST_CASE("pow2_inverse") {
    CHECK(pow2_inverse(3) == rat(1, 8));
    CHECK(pow2_inverse(64) * pow2_inverse(64) == pow2_inverse(128));
}
