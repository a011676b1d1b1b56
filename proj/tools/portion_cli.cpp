// Command-line front end: evaluate aggregation rules, audit axioms, rebuild
// the summary grid, and check Pareto optimality of arbitrary outcomes.
//
// Exit codes: 0 success / consistent, 1 audit contradiction, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <chrono>

#include "portion/audit.hpp"
#include "portion/fixtures.hpp"
#include "portion/lp.hpp"

using namespace portion;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PORTION_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw Error(ErrorCode::ParseError, "PORTION_SEED is not an integer");
        }
    }
    return 1;
}

void parse_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error(ErrorCode::ParseError, "range must look like LO:HI, got " + text);
    lo = std::stoul(text.substr(0, colon));
    hi = std::stoul(text.substr(colon + 1));
    if (lo < 1 || hi < lo) throw Error(ErrorCode::ParseError, "bad range " + text);
}

rules::RuleId parse_rule(const std::string& name) {
    auto r = rules::rule_from_name(name);
    if (!r) throw Error(ErrorCode::ParseError, "unknown rule: " + name);
    return *r;
}

axioms::AxiomId parse_axiom(const std::string& name) {
    auto a = axioms::axiom_from_name(name);
    if (!a) throw Error(ErrorCode::ParseError, "unknown axiom: " + name);
    return *a;
}

Instance load_instance(const std::string& instance_file, const std::string& fixture_id,
                       std::size_t n_flag) {
    if (!instance_file.empty()) return instance_from_json(read_file(instance_file));
    if (!fixture_id.empty())
        return fixtures::build(fixture_id,
                               n_flag ? std::optional<std::size_t>(n_flag) : std::nullopt);
    throw Error(ErrorCode::ParseError, "need --instance FILE or --fixture ID");
}

int cmd_eval(const std::string& rule_name, const std::string& instance_file,
             const std::string& fixture_id, std::size_t n_flag, const std::string& format) {
    rules::RuleId rule = parse_rule(rule_name);
    Instance inst = load_instance(instance_file, fixture_id, n_flag);
    Outcome x = rules::evaluate(rule, inst);
    if (format == "text") {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j) std::cout << " ";
            std::cout << (x.is_exact() ? render_rational(x.rationals()[j]) : x.floats()[j].str(20));
        }
        std::cout << "\n";
    } else {
        json out = json::parse(outcome_to_json(x));
        out["rule"] = rule_name;
        std::cout << out.dump() << "\n";
    }
    return 0;
}

int cmd_audit(const std::string& rule_name, const std::string& axiom_name,
              const audit::AuditConfig& cfg, const std::string& format) {
    rules::RuleId rule = parse_rule(rule_name);
    axioms::AxiomId axiom = parse_axiom(axiom_name);
    audit::CellReport cell = audit::audit_cell(rule, axiom, cfg);
    if (format == "text") {
        std::cout << axioms::axiom_name(axiom) << "/" << rules::rule_name(rule) << ": ";
        switch (cell.status) {
            case audit::CellStatus::VerifiedPass: std::cout << "pass (unrefuted)"; break;
            case audit::CellStatus::Refuted: std::cout << "refuted via " << cell.witness_source; break;
            case audit::CellStatus::Unknown: std::cout << "unknown (open question)"; break;
            case audit::CellStatus::Contradiction: std::cout << "CONTRADICTION: " << cell.detail; break;
        }
        std::cout << "\n";
    } else {
        std::cout << audit::cell_to_json(cell) << "\n";
    }
    return cell.consistent ? 0 : 1;
}

int cmd_search(const std::string& rule_name, const std::string& axiom_name,
               const audit::AuditConfig& acfg) {
    rules::RuleId rule = parse_rule(rule_name);
    axioms::AxiomId axiom = parse_axiom(axiom_name);
    search::SearchConfig cfg;
    cfg.seed = acfg.seed;
    cfg.trials = acfg.trials;
    cfg.m_min = acfg.m_min;
    cfg.m_max = acfg.m_max;
    cfg.n_min = acfg.n_min;
    cfg.n_max = acfg.n_max;
    cfg.grid = acfg.grid;
    cfg.manipulation_budget = acfg.manipulation_budget;
    auto t0 = std::chrono::steady_clock::now();
    search::SearchOutcome out = search::find_axiom_violation(rule, axiom, cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << search::report_json(rule, axiom, cfg, out, wall) << "\n";
    return 0;
}

int cmd_table1(const audit::AuditConfig& cfg, const std::string& format) {
    audit::AuditReport report = audit::run_table1(cfg);
    if (format == "text") std::cout << audit::render_text(report);
    else std::cout << audit::to_json(report) << "\n";
    return report.consistent ? 0 : 1;
}

int cmd_check_pareto(const std::string& instance_file, const std::string& outcome_file,
                     const std::string& format) {
    Instance inst = instance_from_json(read_file(instance_file));
    Outcome x = outcome_from_json(read_file(outcome_file));
    auto imp = lp::pareto_dominated(inst, x.rationals());
    json out;
    out["dominated"] = imp.has_value();
    if (imp) {
        json dom = json::array();
        for (const auto& v : imp->dominator) dom.push_back(render_rational(v));
        out["dominator"] = dom;
        json old_d = json::array(), new_d = json::array();
        for (const auto& v : imp->old_disutilities) old_d.push_back(render_rational(v));
        for (const auto& v : imp->new_disutilities) new_d.push_back(render_rational(v));
        out["disutilities"] = old_d;
        out["dominator_disutilities"] = new_d;
    }
    if (format == "text") {
        std::cout << (imp ? "dominated" : "pareto-optimal") << "\n";
        if (imp) {
            std::cout << "dominator:";
            for (const auto& v : imp->dominator) std::cout << " " << render_rational(v);
            std::cout << "\n";
        }
    } else {
        std::cout << out.dump() << "\n";
    }
    return 0;
}

int cmd_fixtures_list(const std::string& format) {
    if (format == "text") {
        for (const auto& f : fixtures::all_fixtures())
            std::cout << f.id << " (n=" << f.default_n << (f.has_second() ? ", pair" : "")
                      << "): " << f.note << "\n";
    } else {
        json out = json::array();
        for (const auto& f : fixtures::all_fixtures()) {
            json one;
            one["id"] = f.id;
            one["default_n"] = f.default_n;
            one["pair"] = f.has_second();
            one["note"] = f.note;
            out.push_back(one);
        }
        std::cout << out.dump() << "\n";
    }
    return 0;
}

int cmd_fixtures_dump(const std::string& id, std::size_t n_flag) {
    const fixtures::Fixture& f = fixtures::get(id);
    std::size_t n = n_flag ? n_flag : f.default_n;
    json out = json::parse(instance_to_json(fixtures::build(id, n)));
    if (f.has_second()) {
        json pair;
        pair["instance"] = out;
        pair["counterpart"] = json::parse(instance_to_json(f.second(n)));
        if (f.context_agent) pair["agent"] = *f.context_agent + 1;
        if (f.context_candidate) pair["candidate"] = *f.context_candidate + 1;
        std::cout << pair.dump() << "\n";
    } else {
        std::cout << out.dump() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact portioning rules, axioms, and audits"};
    app.require_subcommand(1);

    std::string rule_name, axiom_name, instance_file, outcome_file, fixture_id;
    std::string format = "json", m_range, n_range;
    std::size_t n_flag = 0;
    audit::AuditConfig cfg;

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    };
    auto add_audit_opts = [&](CLI::App* sub) {
        sub->add_option("--trials", cfg.trials, "rule-evaluation budget per range");
        sub->add_option("--seed", cfg.seed, "search seed (default: PORTION_SEED or 1)");
        sub->add_option("--m-range", m_range, "candidate range LO:HI");
        sub->add_option("--n-range", n_range, "agent range LO:HI");
        sub->add_option("--grid", cfg.grid, "score grid denominator");
        sub->add_option("--budget", cfg.manipulation_budget,
                        "misreport budget per (instance, agent)");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate a rule on an instance");
    eval->add_option("--rule", rule_name, "avg|max|min|med|geo|util|egal|im")->required();
    eval->add_option("--instance", instance_file, "instance JSON file");
    eval->add_option("--fixture", fixture_id, "fixture id (see fixtures list)");
    eval->add_option("--n", n_flag, "agent count for parameterized fixtures");
    add_format(eval);

    CLI::App* auditc = app.add_subcommand("audit", "audit one (rule, axiom) cell");
    auditc->add_option("--rule", rule_name)->required();
    auditc->add_option("--axiom", axiom_name)->required();
    add_audit_opts(auditc);
    add_format(auditc);

    CLI::App* searchc = app.add_subcommand("search", "randomized witness search, raw report");
    searchc->add_option("--rule", rule_name)->required();
    searchc->add_option("--axiom", axiom_name)->required();
    add_audit_opts(searchc);

    CLI::App* table = app.add_subcommand("table1", "audit the full rule/axiom grid");
    add_audit_opts(table);
    add_format(table);

    CLI::App* pareto = app.add_subcommand("check-pareto", "test an outcome for domination");
    pareto->add_option("--instance", instance_file, "instance JSON file")->required();
    pareto->add_option("--outcome", outcome_file, "outcome JSON file")->required();
    add_format(pareto);

    CLI::App* fx = app.add_subcommand("fixtures", "list or dump worked instances");
    CLI::App* fx_list = fx->add_subcommand("list", "list fixture ids");
    add_format(fx_list);
    CLI::App* fx_dump = fx->add_subcommand("dump", "print a fixture instance as JSON");
    std::string dump_id;
    fx_dump->add_option("id", dump_id, "fixture id")->required();
    fx_dump->add_option("--n", n_flag, "agent count");
    fx->require_subcommand(1);

    cfg.seed = 1;

    try {
        cfg.seed = default_seed();
        app.parse(argc, argv);
        if (!m_range.empty()) parse_range(m_range, cfg.m_min, cfg.m_max);
        if (!n_range.empty()) parse_range(n_range, cfg.n_min, cfg.n_max);

        if (*eval) return cmd_eval(rule_name, instance_file, fixture_id, n_flag, format);
        if (*auditc) return cmd_audit(rule_name, axiom_name, cfg, format);
        if (*searchc) return cmd_search(rule_name, axiom_name, cfg);
        if (*table) return cmd_table1(cfg, format);
        if (*pareto) return cmd_check_pareto(instance_file, outcome_file, format);
        if (*fx_list) return cmd_fixtures_list(format);
        if (*fx_dump) return cmd_fixtures_dump(dump_id, n_flag);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
