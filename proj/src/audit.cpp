#include "portion/audit.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "portion/fixtures.hpp"

namespace portion::audit {

using axioms::AxiomId;
using axioms::CheckResult;
using axioms::PairContext;
using axioms::Witness;
using nlohmann::json;
using rules::RuleId;

PaperVerdict paper_verdict(RuleId r, AxiomId a, std::size_t m, std::size_t n) {
    auto pass_if = [](bool c) { return c ? PaperVerdict::Pass : PaperVerdict::Fail; };
    switch (a) {
        case AxiomId::ParetoOptimality:
            switch (r) {
                case RuleId::Util:
                case RuleId::Egal: return PaperVerdict::Pass;
                case RuleId::Avg: return pass_if(m <= 2 || n <= 2);
                case RuleId::Med:
                    if (m <= 2 || n <= 2) return PaperVerdict::Pass;
                    if (m == 3) return pass_if(n % 2 == 1);
                    return PaperVerdict::Fail;
                default: return pass_if(m <= 2);
            }
        case AxiomId::RangeRespect:
        case AxiomId::ScoreUnanimity:
            switch (r) {
                case RuleId::Avg:
                case RuleId::Util:
                case RuleId::Egal: return PaperVerdict::Pass;
                case RuleId::Med: return pass_if(m <= 3 || n <= 2);
                default: return pass_if(m <= 2);
            }
        case AxiomId::ScoreRepresentation:
            switch (r) {
                case RuleId::Avg: return PaperVerdict::Pass;
                case RuleId::Max:
                case RuleId::Util: return pass_if(m <= 2 && n <= 2);
                case RuleId::Med:
                case RuleId::Egal: return pass_if(n <= 2);
                case RuleId::IM: return pass_if(m <= 2);
                default: return PaperVerdict::Fail;  // min, geo
            }
        case AxiomId::SingleMindedProportionality:
            switch (r) {
                case RuleId::Avg:
                case RuleId::IM: return PaperVerdict::Pass;
                case RuleId::Min:
                case RuleId::Geo: return pass_if(m <= 2 && n <= 2);
                default: return pass_if(n <= 2);
            }
        case AxiomId::Independence:
            switch (r) {
                case RuleId::Avg: return PaperVerdict::Pass;
                case RuleId::Med:
                case RuleId::Egal: return pass_if(m <= 2 || n <= 2);
                default: return pass_if(m <= 2);
            }
        case AxiomId::ScoreMonotonicity:
            if (r != RuleId::Egal) return PaperVerdict::Pass;
            if (m <= 2 || n <= 2) return PaperVerdict::Pass;
            if (m >= 4 && n >= 4) return PaperVerdict::Fail;
            return PaperVerdict::Open;
        case AxiomId::Reinforcement:
            if (r == RuleId::Med) return pass_if(m <= 2);
            return PaperVerdict::Pass;
        case AxiomId::Strategyproofness:
            switch (r) {
                case RuleId::Util:
                case RuleId::IM: return PaperVerdict::Pass;
                case RuleId::Med: return pass_if(m <= 2 && n % 2 == 1);
                default: return PaperVerdict::Fail;
            }
        case AxiomId::Participation:
            if (r == RuleId::Med) return pass_if(m <= 2);
            return PaperVerdict::Pass;
    }
    return PaperVerdict::Fail;
}

TableEntry table_entry(RuleId r, AxiomId a) {
    switch (a) {
        case AxiomId::ParetoOptimality:
            if (r == RuleId::Util || r == RuleId::Egal) return {true, Footnote::None};
            if (r == RuleId::Avg || r == RuleId::Med) return {false, Footnote::DoubleDagger};
            return {false, Footnote::Dagger};
        case AxiomId::RangeRespect:
        case AxiomId::ScoreUnanimity:
            if (r == RuleId::Avg || r == RuleId::Util || r == RuleId::Egal)
                return {true, Footnote::None};
            if (r == RuleId::Med) return {false, Footnote::DoubleDagger};
            return {false, Footnote::Dagger};
        case AxiomId::ScoreRepresentation:
            if (r == RuleId::Avg) return {true, Footnote::None};
            if (r == RuleId::Med || r == RuleId::Egal) return {false, Footnote::Star};
            if (r == RuleId::IM) return {false, Footnote::Dagger};
            return {false, Footnote::None};
        case AxiomId::SingleMindedProportionality:
            if (r == RuleId::Avg || r == RuleId::IM) return {true, Footnote::None};
            if (r == RuleId::Min || r == RuleId::Geo) return {false, Footnote::None};
            return {false, Footnote::Star};
        case AxiomId::Independence:
            if (r == RuleId::Avg) return {true, Footnote::None};
            if (r == RuleId::Med || r == RuleId::Egal) return {false, Footnote::DoubleDagger};
            return {false, Footnote::Dagger};
        case AxiomId::ScoreMonotonicity:
            if (r == RuleId::Egal) return {false, Footnote::DoubleDagger};
            return {true, Footnote::None};
        case AxiomId::Reinforcement:
            if (r == RuleId::Med) return {false, Footnote::None};
            return {true, Footnote::None};
        case AxiomId::Strategyproofness:
            if (r == RuleId::Util || r == RuleId::IM) return {true, Footnote::None};
            return {false, Footnote::None};
        case AxiomId::Participation:
            if (r == RuleId::Med) return {false, Footnote::None};
            return {true, Footnote::None};
    }
    return {false, Footnote::None};
}

// ---------------------------------------------------------------------------
// Fixture refutations
// ---------------------------------------------------------------------------

namespace {

// every agent reports the shared column value on `keep` and spreads the rest
Instance unanimized(const Instance& inst, std::size_t keep) {
    const std::size_t m = inst.m();
    std::vector<ScoreVector> rows;
    rows.reserve(inst.n());
    for (std::size_t i = 0; i < inst.n(); ++i) {
        Rational kept = inst.score(i, keep);
        Rational rest = (Rational(1) - kept) / Rational(static_cast<long>(m) - 1);
        std::vector<Rational> row(m, rest);
        row[keep] = kept;
        rows.emplace_back(std::move(row));
    }
    return Instance(m, std::move(rows));
}

struct FixtureRefutation {
    std::string source;
    CheckResult result;
};

std::optional<FixtureRefutation> fixture_refutation(RuleId rule, AxiomId axiom) {
    using fixtures::build;
    auto single = [&](const std::string& id, std::size_t n) -> FixtureRefutation {
        Instance inst = build(id, n);
        Outcome x = rules::evaluate(rule, inst);
        return {"fixture:" + id, axioms::check_single(axiom, rule, inst, x)};
    };
    switch (axiom) {
        case AxiomId::ParetoOptimality: {
            std::string id;
            std::size_t n = 2;
            switch (rule) {
                case RuleId::Avg: id = "I1"; n = 3; break;
                case RuleId::Max:
                case RuleId::Min:
                case RuleId::Geo: id = "I4"; break;
                case RuleId::Med: id = "I2"; n = 4; break;
                case RuleId::IM: id = "I5"; break;
                default: return std::nullopt;
            }
            Instance inst = build(id, n);
            Outcome x = rules::evaluate(rule, inst);
            return FixtureRefutation{"fixture:" + id, axioms::check_pareto(rule, inst, x)};
        }
        case AxiomId::RangeRespect:
        case AxiomId::ScoreUnanimity:
            switch (rule) {
                case RuleId::Max:
                case RuleId::Min:
                case RuleId::Geo: return single("I4", 2);
                case RuleId::Med: return single("I3", 3);
                case RuleId::IM: return single("I5", 2);
                default: return std::nullopt;
            }
        case AxiomId::ScoreRepresentation:
            switch (rule) {
                case RuleId::Max: return single("I4", 2);
                case RuleId::Min:
                case RuleId::Geo: return single("SR-minmax", 2);
                case RuleId::Med:
                case RuleId::Egal: return single("I6", 3);
                case RuleId::Util: return single("I7", 2);
                case RuleId::IM: return single("I5", 2);
                default: return std::nullopt;
            }
        case AxiomId::SingleMindedProportionality:
            switch (rule) {
                case RuleId::Max:
                case RuleId::Min:
                case RuleId::Med:
                case RuleId::Geo:
                case RuleId::Util:
                case RuleId::Egal: return single("I6", 3);
                default: return std::nullopt;
            }
        case AxiomId::Independence: {
            Instance a = build("I4", 2), b = unanimized(a, 0);
            switch (rule) {
                case RuleId::Max:
                case RuleId::Min:
                case RuleId::Geo:
                    return FixtureRefutation{
                        "fixture:I4",
                        axioms::check_pair(axiom, rule, a, b, PairContext{std::nullopt, 0})};
                case RuleId::IM: {
                    Instance a5 = build("I5", 2), b5 = unanimized(a5, 0);
                    return FixtureRefutation{
                        "fixture:I5",
                        axioms::check_pair(axiom, rule, a5, b5, PairContext{std::nullopt, 0})};
                }
                case RuleId::Med:
                    return FixtureRefutation{
                        "fixture:I8+I9",
                        axioms::check_pair(axiom, rule, build("I8", 3), build("I9", 3),
                                           PairContext{std::nullopt, 0})};
                case RuleId::Util: {
                    const auto& f = fixtures::get("UTIL-IND");
                    return FixtureRefutation{
                        "fixture:UTIL-IND",
                        axioms::check_pair(axiom, rule, f.build(2), f.second(2),
                                           PairContext{std::nullopt, 0})};
                }
                case RuleId::Egal: {
                    const auto& f = fixtures::get("EGAL-IND");
                    return FixtureRefutation{
                        "fixture:EGAL-IND",
                        axioms::check_pair(axiom, rule, f.build(3), f.second(3),
                                           PairContext{std::nullopt, 0})};
                }
                default: return std::nullopt;
            }
        }
        case AxiomId::ScoreMonotonicity:
            if (rule != RuleId::Egal) return std::nullopt;
            return FixtureRefutation{
                "fixture:I10+I11",
                axioms::check_pair(axiom, rule, fixtures::build("I10"), fixtures::build("I11"),
                                   PairContext{0, 3})};
        case AxiomId::Reinforcement:
            if (rule != RuleId::Med) return std::nullopt;
            return FixtureRefutation{
                "fixture:I12+I13",
                axioms::check_pair(axiom, rule, fixtures::build("I12", 5), fixtures::build("I13"),
                                   PairContext{})};
        case AxiomId::Strategyproofness: {
            std::string id;
            std::size_t n = 2, agent = 0;
            switch (rule) {
                case RuleId::Avg:
                case RuleId::Max:
                case RuleId::Min:
                case RuleId::Geo:
                case RuleId::Egal: id = "SP-common"; break;
                case RuleId::Med: id = "MED-SP-odd"; n = 3; agent = 2; break;
                default: return std::nullopt;
            }
            const auto& f = fixtures::get(id);
            return FixtureRefutation{
                "fixture:" + id,
                axioms::check_pair(axiom, rule, f.build(n), f.second(n),
                                   PairContext{agent, std::nullopt})};
        }
        case AxiomId::Participation: {
            if (rule != RuleId::Med) return std::nullopt;
            return FixtureRefutation{
                "fixture:I12+I13",
                axioms::check_participation(rule, fixtures::build("I12+I13", 6), 5)};
        }
    }
    return std::nullopt;
}

struct Range {
    std::size_t m_min, m_max, n_min, n_max;
    std::string label() const {
        std::ostringstream os;
        os << "m in [" << m_min << "," << m_max << "], n in [" << n_min << "," << n_max << "]";
        return os.str();
    }
    bool empty() const { return m_min > m_max || n_min > n_max; }
};

search::SearchConfig config_for(const AuditConfig& cfg, const Range& r) {
    search::SearchConfig sc;
    sc.seed = cfg.seed;
    sc.trials = cfg.trials;
    sc.m_min = r.m_min;
    sc.m_max = r.m_max;
    sc.n_min = r.n_min;
    sc.n_max = r.n_max;
    sc.grid = cfg.grid;
    sc.manipulation_budget = cfg.manipulation_budget;
    return sc;
}

// Sub-ranges of the audited window where the published verdict is Pass /
// Fail / Open, split along the footnote boundaries.
std::vector<std::pair<Range, PaperVerdict>> split_ranges(RuleId rule, AxiomId axiom,
                                                         const AuditConfig& cfg) {
    // classify the small grid into maximal n-runs per m, then merge equal
    // runs across adjacent m into rectangles
    std::vector<std::pair<Range, PaperVerdict>> rows;
    for (std::size_t m = cfg.m_min; m <= cfg.m_max; ++m) {
        std::size_t n = cfg.n_min;
        while (n <= cfg.n_max) {
            PaperVerdict v = paper_verdict(rule, axiom, m, n);
            std::size_t n2 = n;
            while (n2 + 1 <= cfg.n_max && paper_verdict(rule, axiom, m, n2 + 1) == v) ++n2;
            rows.push_back({Range{m, m, n, n2}, v});
            n = n2 + 1;
        }
    }
    std::vector<std::pair<Range, PaperVerdict>> out;
    for (auto& [range, verdict] : rows) {
        bool merged = false;
        for (auto& [acc, av] : out) {
            if (av == verdict && acc.n_min == range.n_min && acc.n_max == range.n_max &&
                acc.m_max + 1 == range.m_min) {
                acc.m_max = range.m_max;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back({range, verdict});
    }
    return out;
}

}  // namespace

CellReport audit_cell(RuleId rule, AxiomId axiom, const AuditConfig& cfg) {
    CellReport rep;
    rep.rule = rule;
    rep.axiom = axiom;

    auto ranges = split_ranges(rule, axiom, cfg);
    bool window_has_fail = false;
    for (const auto& [range, verdict] : ranges)
        if (!range.empty() && verdict == PaperVerdict::Fail) window_has_fail = true;

    // 1. Published failures inside the window must be refuted: fixture first,
    //    randomized search as fallback.
    if (window_has_fail) {
        bool refuted = false;
        auto fix = fixture_refutation(rule, axiom);
        if (fix && !fix->result.pass && fix->result.witness) {
            bool fits = true;
            for (const auto& inst : fix->result.witness->instances)
                if (inst.m() < cfg.m_min || inst.m() > cfg.m_max || inst.n() > cfg.n_max)
                    fits = false;
            if (fits) {
                rep.status = CellStatus::Refuted;
                rep.witness = fix->result.witness;
                rep.witness_source = fix->source;
                rep.witness_replays = axioms::replay(*rep.witness);
                refuted = rep.witness_replays;
                if (!rep.witness_replays) {
                    rep.consistent = false;
                    rep.status = CellStatus::Contradiction;
                    rep.detail = "fixture witness does not replay";
                }
            }
        }
        if (!refuted && rep.consistent) {
            for (const auto& [range, verdict] : ranges) {
                if (range.empty() || verdict != PaperVerdict::Fail) continue;
                search::SearchOutcome so =
                    search::find_axiom_violation(rule, axiom, config_for(cfg, range));
                if (so.witness) {
                    rep.status = CellStatus::Refuted;
                    rep.witness = so.witness;
                    rep.witness_source = "search";
                    rep.witness_replays = axioms::replay(*rep.witness);
                    refuted = rep.witness_replays;
                    break;
                }
            }
            if (!refuted) {
                rep.consistent = false;
                rep.status = CellStatus::Contradiction;
                rep.detail = "published violation could not be reproduced in the window";
            }
        }
    }

    // 2. Probe the satisfied and open sub-ranges by randomized search.
    for (const auto& [range, verdict] : ranges) {
        if (range.empty() || verdict == PaperVerdict::Fail) continue;
        search::SearchOutcome so =
            search::find_axiom_violation(rule, axiom, config_for(cfg, range));
        RangeEvidence ev;
        ev.range = range.label();
        ev.evaluations = so.evaluations;
        ev.trials_run = so.trials_run;
        ev.witness_found = so.witness.has_value();
        if (verdict == PaperVerdict::Pass) {
            rep.pass_evidence.push_back(ev);
            if (so.witness) {
                rep.consistent = false;
                rep.status = CellStatus::Contradiction;
                rep.witness = so.witness;
                rep.witness_source = "search";
                rep.witness_replays = axioms::replay(*rep.witness);
                rep.detail = "witness found inside a range the published results mark satisfied (" +
                             ev.range + ")";
            }
        } else {  // Open
            rep.open_evidence.push_back(ev);
            if (so.witness) {
                rep.detail = "witness found in the open region (" + ev.range +
                             "); this settles an open question rather than contradicting "
                             "published results";
                if (!rep.witness) {
                    rep.witness = so.witness;
                    rep.witness_source = "search(open-region)";
                    rep.witness_replays = axioms::replay(*rep.witness);
                }
            }
        }
    }

    if (rep.consistent && rep.status != CellStatus::Refuted)
        rep.status = rep.open_evidence.empty() ? CellStatus::VerifiedPass : CellStatus::Unknown;
    return rep;
}

AuditReport run_table1(const AuditConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    AuditReport report;
    report.config = cfg;

    std::vector<std::pair<RuleId, AxiomId>> cells;
    for (AxiomId a : axioms::kAllAxioms)
        for (RuleId r : rules::kAllRules) cells.emplace_back(r, a);

    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    report.cells.resize(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            report.cells[i] = audit_cell(cells[i].first, cells[i].second, cfg);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (const auto& c : report.cells)
        if (!c.consistent) report.consistent = false;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::string cell_symbol(const CellReport& c) {
    TableEntry e = table_entry(c.rule, c.axiom);
    std::string s = e.satisfied ? "Y" : "X";
    switch (e.note) {
        case Footnote::Star: s += "*"; break;
        case Footnote::Dagger: s += "+"; break;
        case Footnote::DoubleDagger: s += "#"; break;
        case Footnote::None: break;
    }
    if (!c.open_evidence.empty()) s += "?";
    if (!c.consistent) s = "!" + s;
    return s;
}

const char* status_name(CellStatus s) {
    switch (s) {
        case CellStatus::VerifiedPass: return "verified-pass";
        case CellStatus::Refuted: return "refuted";
        case CellStatus::Unknown: return "unknown";
        case CellStatus::Contradiction: return "contradiction";
    }
    return "?";
}

}  // namespace

std::string render_text(const AuditReport& report) {
    std::ostringstream os;
    os << "axiom \\ rule              ";
    for (RuleId r : rules::kAllRules) {
        std::string name = rules::rule_name(r);
        os << " " << name;
        for (std::size_t k = name.size(); k < 5; ++k) os << ' ';
    }
    os << "\n";
    for (AxiomId a : axioms::kAllAxioms) {
        std::string name = axioms::axiom_name(a);
        name.resize(26, ' ');
        os << name;
        for (RuleId r : rules::kAllRules) {
            const CellReport* cell = nullptr;
            for (const auto& c : report.cells)
                if (c.rule == r && c.axiom == a) cell = &c;
            std::string sym = cell ? cell_symbol(*cell) : "?";
            sym.resize(6, ' ');
            os << sym;
        }
        os << "\n";
    }
    os << "\nY satisfied, X refuted (witness replayed)\n"
          "* holds for n=2; + holds for m=2; # holds when min(m,n)=2; ? open region probed\n"
          "seed " << report.config.seed << ", " << report.config.trials
       << " evaluations per range, wall " << report.wall_seconds << "s, "
       << (report.consistent ? "all cells consistent" : "INCONSISTENT CELLS PRESENT") << "\n";
    return os.str();
}

std::string cell_to_json(const CellReport& cell) {
    json j;
    j["rule"] = rules::rule_name(cell.rule);
    j["axiom"] = axioms::axiom_name(cell.axiom);
    j["status"] = status_name(cell.status);
    j["consistent"] = cell.consistent;
    TableEntry e = table_entry(cell.rule, cell.axiom);
    j["published"] = e.satisfied ? "satisfied" : "violated";
    switch (e.note) {
        case Footnote::Star: j["published_range_note"] = "satisfied for n=2"; break;
        case Footnote::Dagger: j["published_range_note"] = "satisfied for m=2"; break;
        case Footnote::DoubleDagger:
            j["published_range_note"] = "satisfied when min(m,n)=2";
            break;
        case Footnote::None: break;
    }
    if (cell.witness) {
        j["witness"] = json::parse(cell.witness->to_json());
        j["witness_source"] = cell.witness_source;
        j["witness_replays"] = cell.witness_replays;
    } else {
        j["witness"] = nullptr;
    }
    auto evidence = [](const std::vector<RangeEvidence>& evs) {
        json arr = json::array();
        for (const auto& e2 : evs) {
            json one;
            one["range"] = e2.range;
            one["evaluations"] = e2.evaluations;
            one["trials"] = e2.trials_run;
            one["witness_found"] = e2.witness_found;
            arr.push_back(one);
        }
        return arr;
    };
    j["pass_evidence"] = evidence(cell.pass_evidence);
    j["open_evidence"] = evidence(cell.open_evidence);
    if (!cell.detail.empty()) j["detail"] = cell.detail;
    return j.dump();
}

std::string to_json(const AuditReport& report) {
    json j;
    j["seed"] = report.config.seed;
    j["trials"] = report.config.trials;
    j["m_range"] = {report.config.m_min, report.config.m_max};
    j["n_range"] = {report.config.n_min, report.config.n_max};
    j["grid"] = report.config.grid;
    j["consistent"] = report.consistent;
    j["wall_seconds"] = report.wall_seconds;
    j["version"] = "0.1.0";
    json cells = json::object();
    for (const auto& c : report.cells) {
        std::string key = std::string(axioms::axiom_name(c.axiom)) + "/" + rules::rule_name(c.rule);
        cells[key] = json::parse(cell_to_json(c));
    }
    j["cells"] = cells;
    return j.dump(2);
}

}  // namespace portion::audit
