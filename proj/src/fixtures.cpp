#include "portion/fixtures.hpp"

#include <algorithm>

namespace portion::fixtures {

using rules::RuleId;

namespace {

Instance table(std::size_t m, const std::vector<std::vector<Rational>>& rows) {
    std::vector<ScoreVector> svs;
    svs.reserve(rows.size());
    for (const auto& r : rows) svs.emplace_back(r);
    return Instance(m, std::move(svs));
}

std::vector<Fixture> make_registry() {
    std::vector<Fixture> fs;

    fs.push_back(Fixture{
        "EX-2.4",
        "two agents agreeing on the lead candidate, disagreeing on the remainder",
        2,
        [](std::size_t n) { return n == 2; },
        [](std::size_t) {
            return table(3, {{rat(4, 5), rat(1, 5), rat(0)}, {rat(4, 5), rat(0), rat(1, 5)}});
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I1",
        "averaging leaves the first candidate funded although a transfer helps agent 1",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(0), rat(1, 2), rat(1, 2)},
                                                       {rat(1, 2), rat(1, 2), rat(0)}};
            for (std::size_t i = 2; i < n; ++i) rows.push_back({rat(0), rat(0), rat(1)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I2",
        "even-agent median outcome improvable for agent 2",
        4,
        [](std::size_t n) { return n >= 4 && n % 2 == 0; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {
                {rat(3, 10), rat(7, 20), rat(7, 20)},
                {rat(6, 10), rat(0), rat(4, 10)}};
            for (std::size_t i = 0; i + 1 < n / 2; ++i)
                rows.push_back({rat(7, 10), rat(1, 4), rat(1, 20)});
            for (std::size_t i = 0; i + 1 < n / 2; ++i)
                rows.push_back({rat(1, 4), rat(7, 20), rat(4, 10)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I3",
        "median normalization moves a unanimous score on four candidates",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::size_t base = n % 2 == 1 ? n : n - 1;
            std::vector<std::vector<Rational>> rows = {
                {rat(3, 10), rat(5, 10), rat(0), rat(2, 10)}};
            for (std::size_t i = 0; i < (base - 1) / 2; ++i)
                rows.push_back({rat(3, 10), rat(1, 10), rat(6, 10), rat(0)});
            for (std::size_t i = 0; i < (base - 1) / 2; ++i)
                rows.push_back({rat(3, 10), rat(7, 10), rat(0), rat(0)});
            if (n % 2 == 0) rows.push_back(rows[0]);  // duplicate agent 1
            return table(4, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I4",
        "all agents give the same score to the first candidate",
        2,
        [](std::size_t n) { return n >= 2; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1, 4), rat(1, 2), rat(1, 4)}};
            for (std::size_t i = 1; i < n; ++i) rows.push_back({rat(1, 4), rat(1, 4), rat(1, 2)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I5",
        "near-unanimous top candidate that moving phantoms underfund",
        2,
        [](std::size_t n) { return n >= 2; },
        [](std::size_t n) {
            const long ln = static_cast<long>(n);
            std::vector<std::vector<Rational>> rows = {
                {rat(ln + 1, ln + 2), rat(1, ln + 2), rat(0)}};
            for (std::size_t i = 1; i < n; ++i)
                rows.push_back({rat(ln + 1, ln + 2), rat(0), rat(1, ln + 2)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I6",
        "one agent against the rest, all single-minded",
        3,
        [](std::size_t n) { return n >= 2; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1), rat(0)}};
            for (std::size_t i = 1; i < n; ++i) rows.push_back({rat(0), rat(1)});
            return table(2, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I7",
        "a single-minded agent against a uniform one",
        2,
        [](std::size_t n) { return n == 2; },
        [](std::size_t) {
            return table(3, {{rat(1), rat(0), rat(0)}, {rat(1, 3), rat(1, 3), rat(1, 3)}});
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I8",
        "median independence pair, first member",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::size_t top = (n + 2) / 2;  // ceil((n+1)/2)
            std::vector<std::vector<Rational>> rows = {{rat(1, 2), rat(1, 2), rat(0)}};
            for (std::size_t i = 1; i < top; ++i) rows.push_back({rat(1, 2), rat(0), rat(1, 2)});
            for (std::size_t i = top; i < n; ++i) rows.push_back({rat(0), rat(1, 2), rat(1, 2)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I9",
        "median independence pair, second member",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::size_t top = (n + 2) / 2;
            std::vector<std::vector<Rational>> rows;
            for (std::size_t i = 0; i < top; ++i) rows.push_back({rat(1, 2), rat(0), rat(1, 2)});
            for (std::size_t i = top; i < n; ++i) rows.push_back({rat(0), rat(1, 2), rat(1, 2)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I10",
        "leximin pins half on the outer candidates",
        4,
        [](std::size_t n) { return n == 4; },
        [](std::size_t) {
            return table(4, {{rat(1), rat(0), rat(0), rat(0)},
                             {rat(1, 2), rat(1, 4), rat(1, 4), rat(0)},
                             {rat(0), rat(1, 2), rat(0), rat(1, 2)},
                             {rat(0), rat(0), rat(1, 2), rat(1, 2)}});
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I11",
        "raising the last candidate lowers its leximin share",
        4,
        [](std::size_t n) { return n == 4; },
        [](std::size_t) {
            return table(4, {{rat(1, 2), rat(0), rat(0), rat(1, 2)},
                             {rat(1, 2), rat(1, 4), rat(1, 4), rat(0)},
                             {rat(0), rat(1, 2), rat(0), rat(1, 2)},
                             {rat(0), rat(0), rat(1, 2), rat(1, 2)}});
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I12",
        "odd electorate whose median outcome matches the extra agent's ideal",
        5,
        [](std::size_t n) { return n >= 5 && n % 2 == 1; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows;
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(2, 3), rat(1, 3), rat(0)});
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(0), rat(1, 3), rat(2, 3)});
            rows.push_back({rat(1, 2), rat(0), rat(1, 2)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I13",
        "a lone agent reporting the median outcome of the odd electorate",
        1,
        [](std::size_t n) { return n == 1; },
        [](std::size_t) { return table(3, {{rat(3, 8), rat(2, 8), rat(3, 8)}}); },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "I12+I13",
        "the odd electorate together with the lone agent it used to satisfy",
        6,
        [](std::size_t n) { return n >= 6 && n % 2 == 0; },
        [](std::size_t n) {
            const Fixture& base = get("I12");
            return concat(base.build(n - 1), get("I13").build(1));
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "SP-common",
        "one agent against a like-minded crowd; overstating the favorite pays",
        2,
        [](std::size_t n) { return n >= 2; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(4, 5), rat(1, 5)}};
            for (std::size_t i = 1; i < n; ++i) rows.push_back({rat(1, 5), rat(4, 5)});
            return table(2, rows);
        },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1), rat(0)}};
            for (std::size_t i = 1; i < n; ++i) rows.push_back({rat(1, 5), rat(4, 5)});
            return table(2, rows);
        },
        0, std::nullopt});

    fs.push_back(Fixture{
        "MED-SP-odd",
        "median manipulation by the last agent on three candidates",
        3,
        [](std::size_t n) { return n >= 3 && n % 2 == 1; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows;
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(0), rat(2, 5), rat(3, 5)});
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(3, 5), rat(0), rat(2, 5)});
            rows.push_back({rat(2, 5), rat(3, 5), rat(0)});
            return table(3, rows);
        },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows;
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(0), rat(2, 5), rat(3, 5)});
            for (std::size_t i = 0; i < (n - 1) / 2; ++i)
                rows.push_back({rat(3, 5), rat(0), rat(2, 5)});
            rows.push_back({rat(8, 15), rat(7, 15), rat(0)});
            return table(3, rows);
        },
        std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "MED-SP-even",
        "even-electorate median averages two middle reports and invites overstatement",
        4,
        [](std::size_t n) { return n >= 4 && n % 2 == 0; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(2, 3), rat(1, 3)}};
            for (std::size_t i = 0; i + 1 < n / 2; ++i) rows.push_back({rat(1), rat(0)});
            for (std::size_t i = 0; i < n / 2; ++i) rows.push_back({rat(0), rat(1)});
            return table(2, rows);
        },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1), rat(0)}};
            for (std::size_t i = 0; i + 1 < n / 2; ++i) rows.push_back({rat(1), rat(0)});
            for (std::size_t i = 0; i < n / 2; ++i) rows.push_back({rat(0), rat(1)});
            return table(2, rows);
        },
        0, std::nullopt});

    fs.push_back(Fixture{
        "UTIL-IND",
        "welfare tie-breaking reacts to a column the shared candidate never touches",
        2,
        [](std::size_t n) { return n >= 2; },
        [](std::size_t n) {
            if (n == 2) return table(3, {{rat(1), rat(0), rat(0)}, {rat(0), rat(1), rat(0)}});
            std::vector<std::vector<Rational>> rows = {{rat(0), rat(0), rat(1)}};
            std::size_t ones = n % 2 == 1 ? (n - 1) / 2 : n / 2;
            std::size_t twos = n - 1 - ones;
            for (std::size_t i = 0; i < ones; ++i) rows.push_back({rat(1), rat(0), rat(0)});
            for (std::size_t i = 0; i < twos; ++i) rows.push_back({rat(0), rat(1), rat(0)});
            return table(3, rows);
        },
        [](std::size_t n) {
            if (n == 2) return table(3, {{rat(1), rat(0), rat(0)}, {rat(0), rat(1, 2), rat(1, 2)}});
            std::vector<std::vector<Rational>> rows = {{rat(0), rat(1), rat(0)}};
            std::size_t ones = n % 2 == 1 ? (n - 1) / 2 : n / 2;
            std::size_t twos = n - 1 - ones;
            for (std::size_t i = 0; i < ones; ++i) rows.push_back({rat(1), rat(0), rat(0)});
            for (std::size_t i = 0; i < twos; ++i) rows.push_back({rat(0), rat(1), rat(0)});
            return table(3, rows);
        },
        std::nullopt, 0});

    fs.push_back(Fixture{
        "EGAL-IND",
        "leximin shifts the first candidate when far columns change",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1), rat(0), rat(0)},
                                                       {rat(0), rat(1), rat(0)}};
            for (std::size_t i = 2; i < n; ++i) rows.push_back({rat(0), rat(0), rat(1)});
            return table(3, rows);
        },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(1), rat(0), rat(0)}};
            for (std::size_t i = 1; i < n; ++i) rows.push_back({rat(0), rat(1), rat(0)});
            return table(3, rows);
        },
        std::nullopt, 0});

    fs.push_back(Fixture{
        "PO-RR-gap",
        "a range-respecting outcome that is still dominated",
        3,
        [](std::size_t n) { return n >= 3; },
        [](std::size_t n) {
            std::vector<std::vector<Rational>> rows = {{rat(0), rat(0), rat(1)},
                                                       {rat(0), rat(1, 2), rat(1, 2)}};
            for (std::size_t i = 2; i < n; ++i) rows.push_back({rat(1, 2), rat(1, 2), rat(0)});
            return table(3, rows);
        },
        nullptr, std::nullopt, std::nullopt});

    fs.push_back(Fixture{
        "SR-minmax",
        "a fully committed agent silences a hedged one under min or geo",
        2,
        [](std::size_t n) { return n == 2; },
        [](std::size_t) { return table(2, {{rat(1), rat(0)}, {rat(1, 2), rat(1, 2)}}); },
        nullptr, std::nullopt, std::nullopt});

    return fs;
}

}  // namespace

const std::vector<Fixture>& all_fixtures() {
    static const std::vector<Fixture> registry = make_registry();
    return registry;
}

const Fixture& get(const std::string& id) {
    for (const auto& f : all_fixtures())
        if (f.id == id) return f;
    throw Error(ErrorCode::NoExpectation, "unknown fixture: " + id);
}

Instance build(const std::string& id, std::optional<std::size_t> n) {
    const Fixture& f = get(id);
    std::size_t agents = n.value_or(f.default_n);
    if (!f.n_valid(agents))
        throw Error(ErrorCode::InvalidArgument,
                    "fixture " + id + " is not defined for n=" + std::to_string(agents));
    return f.build(agents);
}

std::optional<std::vector<Rational>> expected_outcome(const std::string& id, RuleId rule,
                                                      std::size_t n) {
    const long ln = static_cast<long>(n);
    if (id == "EX-2.4") {
        switch (rule) {
            case RuleId::Avg:
            case RuleId::Med:
            case RuleId::Util:
            case RuleId::Egal:
                return std::vector<Rational>{rat(4, 5), rat(1, 10), rat(1, 10)};
            case RuleId::Min:
            case RuleId::Geo:
                return std::vector<Rational>{rat(1), rat(0), rat(0)};
            case RuleId::Max:
                return std::vector<Rational>{rat(2, 3), rat(1, 6), rat(1, 6)};
            case RuleId::IM:
                return std::vector<Rational>{rat(3, 5), rat(1, 5), rat(1, 5)};
        }
    }
    if (id == "I1" && rule == RuleId::Avg)
        return std::vector<Rational>{rat(1, 2 * ln), rat(2, 2 * ln),
                                     Rational(1) - rat(3, 2 * ln)};
    if (id == "I2" && rule == RuleId::Med)
        return std::vector<Rational>{rat(2, 5), rat(4, 15), rat(1, 3)};
    if (id == "I3" && rule == RuleId::Med) {
        if (n == 4)
            return std::vector<Rational>{rat(1, 3), rat(5, 9), rat(0), rat(1, 9)};
        return std::vector<Rational>{rat(3, 8), rat(5, 8), rat(0), rat(0)};
    }
    if (id == "I4") {
        if (rule == RuleId::Min) return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
        if (rule == RuleId::Max) return std::vector<Rational>{rat(1, 5), rat(2, 5), rat(2, 5)};
    }
    if (id == "I5" && rule == RuleId::IM)
        return std::vector<Rational>{rat(ln, ln + 2), rat(1, ln + 2), rat(1, ln + 2)};
    if (id == "I6") {
        switch (rule) {
            case RuleId::Max:
                return std::vector<Rational>{rat(1, 2), rat(1, 2)};
            case RuleId::Util:
                if (n >= 3) return std::vector<Rational>{rat(0), rat(1)};
                return std::vector<Rational>{rat(1, 2), rat(1, 2)};
            case RuleId::Med:
                if (n >= 3) return std::vector<Rational>{rat(0), rat(1)};
                return std::vector<Rational>{rat(1, 2), rat(1, 2)};
            case RuleId::Min:
            case RuleId::Geo:
            case RuleId::Egal:
                return std::vector<Rational>{rat(1, 2), rat(1, 2)};
            case RuleId::IM:
                return std::vector<Rational>{rat(1, ln), rat(ln - 1, ln)};
            case RuleId::Avg:
                return std::vector<Rational>{rat(1, ln), rat(ln - 1, ln)};
        }
    }
    if (id == "I7" && rule == RuleId::Util)
        return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
    if (id == "I8" && rule == RuleId::Med) {
        if (n % 2 == 1) return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
        return std::vector<Rational>{rat(2, 5), rat(1, 5), rat(2, 5)};
    }
    if (id == "I9" && rule == RuleId::Med)
        return std::vector<Rational>{rat(1, 2), rat(0), rat(1, 2)};
    if (id == "I10" && rule == RuleId::Egal)
        return std::vector<Rational>{rat(1, 2), rat(0), rat(0), rat(1, 2)};
    if (id == "I11" && rule == RuleId::Egal)
        return std::vector<Rational>{rat(1, 5), rat(1, 5), rat(1, 5), rat(2, 5)};
    if (id == "I12" && rule == RuleId::Med)
        return std::vector<Rational>{rat(3, 8), rat(1, 4), rat(3, 8)};
    if (id == "I13")
        return std::vector<Rational>{rat(3, 8), rat(1, 4), rat(3, 8)};
    if (id == "I12+I13" && rule == RuleId::Med)
        return std::vector<Rational>{rat(21, 58), rat(16, 58), rat(21, 58)};
    if (id == "SP-common") {
        switch (rule) {
            case RuleId::Avg:
                return std::vector<Rational>{rat(1, 5) + rat(3, 5 * ln),
                                             rat(4, 5) - rat(3, 5 * ln)};
            case RuleId::Max:
            case RuleId::Min:
            case RuleId::Egal:
                return std::vector<Rational>{rat(1, 2), rat(1, 2)};
            case RuleId::Med:
                if (n == 2) return std::vector<Rational>{rat(1, 2), rat(1, 2)};
                return std::vector<Rational>{rat(1, 5), rat(4, 5)};
            default:
                return std::nullopt;
        }
    }
    if (id == "MED-SP-odd" && rule == RuleId::Med)
        return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
    if (id == "MED-SP-even" && rule == RuleId::Med)
        return std::vector<Rational>{rat(1, 3), rat(2, 3)};
    if (id == "PO-RR-gap" && rule == RuleId::Avg && n == 3)
        return std::vector<Rational>{rat(1, 6), rat(1, 3), rat(1, 2)};
    if (id == "SR-minmax" && (rule == RuleId::Min || rule == RuleId::Geo))
        return std::vector<Rational>{rat(1), rat(0)};
    if (id == "UTIL-IND" && rule == RuleId::Util) {
        if (n == 2) return std::vector<Rational>{rat(1, 2), rat(1, 2), rat(0)};
        if (n == 3) return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
        if (n % 2 == 1) return std::vector<Rational>{rat(1, 2), rat(1, 2), rat(0)};
        return std::vector<Rational>{rat(1), rat(0), rat(0)};
    }
    if (id == "EGAL-IND" && rule == RuleId::Egal)
        return std::vector<Rational>{rat(1, 3), rat(1, 3), rat(1, 3)};
    return std::nullopt;
}

}  // namespace portion::fixtures
