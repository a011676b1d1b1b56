#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "portion/axioms.hpp"
#include "portion/fixtures.hpp"
#include "portion/lp.hpp"

using namespace portion;
using namespace portion::axioms;
using rules::RuleId;
using testutil::make_instance;

namespace {

CheckResult run_single(AxiomId axiom, RuleId rule, const Instance& inst) {
    return check_single(axiom, rule, inst, rules::evaluate(rule, inst));
}

}  // namespace

TEST_CASE("axiom names round-trip and declare their arity") {
    for (AxiomId a : kAllAxioms) {
        auto back = axiom_from_name(axiom_name(a));
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    CHECK(axiom_arity(AxiomId::RangeRespect) == AxiomArity::Single);
    CHECK(axiom_arity(AxiomId::Independence) == AxiomArity::Pair);
    CHECK(axiom_arity(AxiomId::Participation) == AxiomArity::Removal);
}

TEST_CASE("range-respect witness on the shared-score instance") {
    Instance i4 = fixtures::build("I4", 2);
    CheckResult max_rr = run_single(AxiomId::RangeRespect, RuleId::Max, i4);
    REQUIRE_FALSE(max_rr.pass);
    CHECK(max_rr.witness->candidate == 0);
    CHECK(max_rr.witness->lhs == rat(1, 5));   // below the unanimous 1/4
    CHECK(max_rr.witness->rhs == rat(1, 4));
    CHECK(replay(*max_rr.witness));

    CheckResult min_rr = run_single(AxiomId::RangeRespect, RuleId::Min, i4);
    REQUIRE_FALSE(min_rr.pass);
    CHECK(min_rr.witness->lhs == rat(1, 3));   // above it
    CHECK(replay(*min_rr.witness));

    CHECK(run_single(AxiomId::RangeRespect, RuleId::Avg, i4).pass);
    CHECK(run_single(AxiomId::RangeRespect, RuleId::Geo, i4).pass == false);
}

TEST_CASE("score-unanimity witnesses") {
    Instance i4 = fixtures::build("I4", 2);
    for (RuleId r : {RuleId::Max, RuleId::Min, RuleId::Geo}) {
        CheckResult su = run_single(AxiomId::ScoreUnanimity, r, i4);
        REQUIRE_FALSE(su.pass);
        CHECK(su.witness->candidate == 0);
        CHECK(su.witness->gamma == rat(1, 4));
        CHECK(replay(*su.witness));
    }
    Instance i5 = fixtures::build("I5", 2);
    CheckResult im = run_single(AxiomId::ScoreUnanimity, RuleId::IM, i5);
    REQUIRE_FALSE(im.pass);
    CHECK(im.witness->lhs == rat(2, 4));  // n/(n+2) at n=2
    CHECK(im.witness->rhs == rat(3, 4));
    Instance i3 = fixtures::build("I3", 3);
    CheckResult med = run_single(AxiomId::ScoreUnanimity, RuleId::Med, i3);
    REQUIRE_FALSE(med.pass);
    CHECK(med.witness->lhs == rat(3, 8));
    CHECK(med.witness->rhs == rat(3, 10));
}

TEST_CASE("score-representation witnesses") {
    Instance i7 = fixtures::build("I7");
    CheckResult util = run_single(AxiomId::ScoreRepresentation, RuleId::Util, i7);
    REQUIRE_FALSE(util.pass);
    CHECK(util.witness->candidate == 0);
    CHECK(util.witness->rhs == rat(1, 2));  // gamma=1, one of two agents
    CHECK(util.witness->gamma == rat(1));
    CHECK(replay(*util.witness));

    Instance srm = fixtures::build("SR-minmax");
    for (RuleId r : {RuleId::Min, RuleId::Geo}) {
        CheckResult c = run_single(AxiomId::ScoreRepresentation, r, srm);
        REQUIRE_FALSE(c.pass);
        CHECK(c.witness->candidate == 1);
        CHECK(c.witness->rhs == rat(1, 4));
    }

    // average satisfies it everywhere
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        Instance inst = testutil::random_grid_instance(rng, 2 + rng() % 3, 2 + rng() % 4, 20);
        CHECK(run_single(AxiomId::ScoreRepresentation, RuleId::Avg, inst).pass);
    }
}

TEST_CASE("score-representation over realized scores equals a fine threshold grid") {
    // quantifying over the realized column scores is sufficient: sweeping a
    // fine rational grid of thresholds must give the same verdict
    std::mt19937_64 rng(23);
    auto grid_check = [](const Instance& inst, const Outcome& x) {
        auto xs = x.rationals();
        for (std::size_t j = 0; j < inst.m(); ++j) {
            for (long k = 1; k <= 48; ++k) {
                Rational gamma = rat(k, 48);
                Rational required = gamma *
                                    Rational(static_cast<long>(count_at_least(inst, j, gamma))) /
                                    Rational(static_cast<long>(inst.n()));
                if (xs[j] < required) return false;
            }
        }
        return true;
    };
    int checked = 0;
    for (int iter = 0; iter < 120; ++iter) {
        Instance inst = testutil::random_grid_instance(rng, 2 + rng() % 3, 2 + rng() % 4, 12);
        for (RuleId r : {RuleId::Avg, RuleId::Max, RuleId::Med, RuleId::Util, RuleId::IM}) {
            Outcome x = rules::evaluate(r, inst);
            CheckResult realized = check_single(AxiomId::ScoreRepresentation, r, inst, x);
            CHECK(realized.pass == grid_check(inst, x));
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("single-minded proportionality is vacuous off the single-minded domain") {
    Instance ex = fixtures::build("EX-2.4");
    CheckResult vac = run_single(AxiomId::SingleMindedProportionality, RuleId::Max, ex);
    CHECK(vac.pass);
    CHECK(vac.vacuous);

    Instance i6 = fixtures::build("I6", 3);
    struct Expect { RuleId rule; Rational x2; } cases[] = {
        {RuleId::Max, rat(1, 2)}, {RuleId::Min, rat(1, 2)}, {RuleId::Med, rat(1)},
        {RuleId::Geo, rat(1, 2)}, {RuleId::Util, rat(1)},   {RuleId::Egal, rat(1, 2)},
    };
    for (const auto& c : cases) {
        CheckResult r = run_single(AxiomId::SingleMindedProportionality, c.rule, i6);
        REQUIRE_FALSE(r.pass);
        CHECK(replay(*r.witness));
    }
    CHECK(run_single(AxiomId::SingleMindedProportionality, RuleId::Avg, i6).pass);
    CHECK(run_single(AxiomId::SingleMindedProportionality, RuleId::IM, i6).pass);
}

TEST_CASE("pareto witnesses carry a valid dominator") {
    Instance i1 = fixtures::build("I1", 3);
    CheckResult avg = check_pareto(RuleId::Avg, i1, rules::evaluate(RuleId::Avg, i1));
    REQUIRE_FALSE(avg.pass);
    REQUIRE(avg.witness->dominator.has_value());
    // the dominator weakly improves everyone, strictly someone
    auto x = rules::evaluate(RuleId::Avg, i1).rationals();
    bool strict = false;
    for (std::size_t i = 0; i < i1.n(); ++i) {
        Rational old_d = disutility(i1.row(i), x);
        Rational new_d = disutility(i1.row(i), *avg.witness->dominator);
        CHECK(new_d <= old_d);
        if (new_d < old_d) strict = true;
    }
    CHECK(strict);
    CHECK(replay(*avg.witness));

    Instance i2 = fixtures::build("I2", 4);
    CheckResult med = check_pareto(RuleId::Med, i2, rules::evaluate(RuleId::Med, i2));
    REQUIRE_FALSE(med.pass);
    CHECK(replay(*med.witness));

    // leximin and welfare-optimal outcomes are never dominated
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 15; ++iter) {
        Instance inst = testutil::random_grid_instance(rng, 2 + rng() % 3, 2 + rng() % 4, 10);
        CHECK(check_pareto(RuleId::Egal, inst, rules::evaluate(RuleId::Egal, inst)).pass);
        CHECK(check_pareto(RuleId::Util, inst, rules::evaluate(RuleId::Util, inst)).pass);
    }
}

TEST_CASE("independence witnesses: median, welfare rules, and normalized rules") {
    CheckResult med = check_pair(AxiomId::Independence, RuleId::Med, fixtures::build("I8", 3),
                                 fixtures::build("I9", 3), PairContext{std::nullopt, 0});
    REQUIRE_FALSE(med.pass);
    CHECK(med.witness->lhs == rat(1, 3));
    CHECK(med.witness->rhs == rat(1, 2));
    CHECK(replay(*med.witness));

    const auto& util_fix = fixtures::get("UTIL-IND");
    CheckResult util = check_pair(AxiomId::Independence, RuleId::Util, util_fix.build(2),
                                  util_fix.second(2), PairContext{std::nullopt, 0});
    REQUIRE_FALSE(util.pass);
    CHECK(util.witness->lhs == rat(1, 2));
    CHECK(util.witness->rhs == rat(1, 3));

    for (std::size_t n : {3, 4, 5, 6}) {
        CheckResult u = check_pair(AxiomId::Independence, RuleId::Util, util_fix.build(n),
                                   util_fix.second(n), PairContext{std::nullopt, 0});
        REQUIRE_FALSE(u.pass);
        CHECK(replay(*u.witness));
    }

    const auto& egal_fix = fixtures::get("EGAL-IND");
    CheckResult egal = check_pair(AxiomId::Independence, RuleId::Egal, egal_fix.build(3),
                                  egal_fix.second(3), PairContext{std::nullopt, 0});
    REQUIRE_FALSE(egal.pass);
    CHECK(egal.witness->lhs == rat(1, 3));
    CHECK(egal.witness->rhs == rat(1, 2));

    CHECK_THROWS_AS(check_pair(AxiomId::Independence, RuleId::Med, fixtures::build("I8", 3),
                               fixtures::build("I9", 3), PairContext{std::nullopt, 1}),
                    Error);  // column 2 differs: bad context
}

TEST_CASE("score-monotonicity witness for the leximin rule") {
    CheckResult egal = check_pair(AxiomId::ScoreMonotonicity, RuleId::Egal,
                                  fixtures::build("I10"), fixtures::build("I11"),
                                  PairContext{0, 3});
    REQUIRE_FALSE(egal.pass);
    CHECK(egal.witness->lhs == rat(1, 2));
    CHECK(egal.witness->rhs == rat(2, 5));
    CHECK(replay(*egal.witness));

    // coordinate-wise rules obey it on the same pair
    for (RuleId r : {RuleId::Avg, RuleId::Max, RuleId::Min, RuleId::Med, RuleId::Geo,
                     RuleId::Util, RuleId::IM}) {
        CHECK(check_pair(AxiomId::ScoreMonotonicity, r, fixtures::build("I10"),
                         fixtures::build("I11"), PairContext{0, 3})
                  .pass);
    }
}

TEST_CASE("strategyproofness witnesses on the common manipulation profile") {
    const auto& sp = fixtures::get("SP-common");
    struct Expect { RuleId rule; Rational before, after; } cases[] = {
        {RuleId::Avg, rat(3, 5) - rat(3, 5) / 2 + rat(3, 5) / 2, rat(0)},  // placeholder below
    };
    (void)cases;
    for (std::size_t n : {2, 3, 5}) {
        for (RuleId r : {RuleId::Avg, RuleId::Max, RuleId::Min, RuleId::Geo, RuleId::Egal}) {
            CheckResult c = check_pair(AxiomId::Strategyproofness, r, sp.build(n), sp.second(n),
                                       PairContext{0, std::nullopt});
            REQUIRE_FALSE(c.pass);
            CHECK(replay(*c.witness));
        }
    }
    // worked disutilities at n=2 for the averaging rule: 3/5 -> 2/5... the
    // exact pair is asserted through the fixture expectations in test_fixtures
    CheckResult med = check_pair(AxiomId::Strategyproofness, RuleId::Med,
                                 fixtures::get("MED-SP-odd").build(3),
                                 fixtures::get("MED-SP-odd").second(3),
                                 PairContext{2, std::nullopt});
    REQUIRE_FALSE(med.pass);
    CHECK(med.witness->lhs == rat(2, 3));
    CHECK(med.witness->rhs == rat(3, 5));

    CheckResult even = check_pair(AxiomId::Strategyproofness, RuleId::Med,
                                  fixtures::get("MED-SP-even").build(4),
                                  fixtures::get("MED-SP-even").second(4),
                                  PairContext{0, std::nullopt});
    REQUIRE_FALSE(even.pass);
    CHECK(even.witness->lhs == rat(2, 3));
    CHECK(even.witness->rhs == rat(1, 3));

    // the strategyproof pair stays clean on the same profiles
    for (std::size_t n : {2, 3, 5}) {
        for (RuleId r : {RuleId::Util, RuleId::IM}) {
            CHECK(check_pair(AxiomId::Strategyproofness, r, sp.build(n), sp.second(n),
                             PairContext{0, std::nullopt})
                      .pass);
        }
    }
}

TEST_CASE("reinforcement witness for the median rule") {
    CheckResult med = check_pair(AxiomId::Reinforcement, RuleId::Med, fixtures::build("I12", 5),
                                 fixtures::build("I13"), PairContext{});
    REQUIRE_FALSE(med.pass);
    CHECK(med.witness->candidate == 0);
    CHECK(med.witness->lhs == rat(21, 58));
    CHECK(med.witness->rhs == rat(3, 8));
    CHECK(replay(*med.witness));

    // vacuous pass when the two electorates disagree
    CheckResult vac = check_pair(AxiomId::Reinforcement, RuleId::Med, fixtures::build("I12", 5),
                                 fixtures::build("EX-2.4"), PairContext{});
    CHECK(vac.pass);
    CHECK(vac.vacuous);

    // the average rule reinforces the same pair
    CheckResult avg = check_pair(AxiomId::Reinforcement, RuleId::Avg, fixtures::build("I13"),
                                 fixtures::build("I13"), PairContext{});
    CHECK(avg.pass);
    CHECK_FALSE(avg.vacuous);
}

TEST_CASE("participation witness for the median rule") {
    Instance combined = concat(fixtures::build("I12", 5), fixtures::build("I13"));
    CheckResult med = check_participation(RuleId::Med, combined, 5);
    REQUIRE_FALSE(med.pass);
    CHECK(med.witness->rhs == rat(0));  // her ideal is the outcome without her
    CHECK(replay(*med.witness));

    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 60; ++iter) {
        Instance inst = testutil::random_grid_instance(rng, 2 + rng() % 3, 2 + rng() % 4, 12);
        std::size_t agent = rng() % inst.n();
        CHECK(check_participation(RuleId::Avg, inst, agent).pass);
    }

    // unanimity means abstention never helps
    Instance unan(3, std::vector<ScoreVector>(
                         4, ScoreVector({rat(1, 2), rat(1, 4), rat(1, 4)})));
    for (RuleId r : rules::kAllRules) CHECK(check_participation(r, unan, 1).pass);
}

TEST_CASE("implication suite flags no inconsistencies on rule outputs") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 20; ++iter) {
        Instance inst = testutil::random_grid_instance(rng, 2 + rng() % 3, 2 + rng() % 4, 10);
        for (RuleId r : {RuleId::Avg, RuleId::Egal, RuleId::Util, RuleId::Med}) {
            ImplicationReport rep = implication_suite(r, inst, rules::evaluate(r, inst));
            CHECK(rep.consistent);
        }
    }

    // range-respecting but dominated: consistent with one-directional implication
    Instance gap = fixtures::build("PO-RR-gap", 3);
    Outcome x = Outcome::exact({rat(1, 6), rat(1, 3), rat(1, 2)});
    ImplicationReport rep = implication_suite(RuleId::Avg, gap, x);
    CHECK(rep.consistent);
    CHECK(rep.range_respect.pass);
    CHECK_FALSE(rep.pareto.pass);

    // at m=2, range-respect forces pareto-optimality
    std::mt19937_64 rng2(19);
    for (int iter = 0; iter < 30; ++iter) {
        Instance inst = testutil::random_grid_instance(rng2, 2, 2 + rng2() % 4, 10);
        Outcome avg = rules::evaluate(RuleId::Avg, inst);
        ImplicationReport r2 = implication_suite(RuleId::Avg, inst, avg);
        CHECK(r2.consistent);
        CHECK(r2.pareto.pass);
    }
}

TEST_CASE("witness JSON carries the schema fields") {
    Instance i5 = fixtures::build("I5", 2);
    CheckResult su = run_single(AxiomId::ScoreUnanimity, RuleId::IM, i5);
    REQUIRE_FALSE(su.pass);
    std::string js = su.witness->to_json();
    for (const char* key : {"axiom", "rule", "instances", "indices", "lhs", "rhs", "relation"})
        CHECK(js.find(key) != std::string::npos);
    CHECK(js.find("score-unanimity") != std::string::npos);
    CHECK(js.find("3/4") != std::string::npos);
}

TEST_CASE("geo margins suppress float-noise witnesses") {
    // unanimous instance: geo reproduces the row up to rounding; no axiom
    // checker may report a violation from rounding noise
    Instance unan(3, std::vector<ScoreVector>(3, ScoreVector({rat(1, 3), rat(1, 3), rat(1, 3)})));
    Outcome g = rules::evaluate(RuleId::Geo, unan);
    CHECK_FALSE(g.is_exact());
    CHECK(check_single(AxiomId::RangeRespect, RuleId::Geo, unan, g).pass);
    CHECK(check_single(AxiomId::ScoreUnanimity, RuleId::Geo, unan, g).pass);
    CHECK(check_single(AxiomId::ScoreRepresentation, RuleId::Geo, unan, g).pass);
}
