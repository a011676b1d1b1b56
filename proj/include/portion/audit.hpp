#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "portion/axioms.hpp"
#include "portion/search.hpp"

namespace portion::audit {

/// The published verdict for a (rule, axiom) cell at a concrete size,
/// including the footnote fine structure. Open marks the one region the
/// literature leaves unresolved (egalitarian score-monotonicity at m=3 or
/// n=3 with the other dimension at least 3).
enum class PaperVerdict { Pass, Fail, Open };
PaperVerdict paper_verdict(rules::RuleId rule, axioms::AxiomId axiom, std::size_t m,
                           std::size_t n);

enum class Footnote { None, Star, Dagger, DoubleDagger };

/// The table entry as printed: satisfied or not, plus the range footnote.
struct TableEntry {
    bool satisfied;
    Footnote note;
};
TableEntry table_entry(rules::RuleId rule, axioms::AxiomId axiom);

struct AuditConfig {
    std::uint64_t seed = 1;
    std::size_t trials = 10000;  // rule evaluations per verification range
    std::size_t m_min = 2, m_max = 5;
    std::size_t n_min = 2, n_max = 8;
    long grid = 20;
    std::size_t manipulation_budget = 500;
    unsigned threads = 0;  // 0 = hardware concurrency
};

enum class CellStatus { VerifiedPass, Refuted, Unknown, Contradiction };

struct RangeEvidence {
    std::string range;
    std::size_t evaluations = 0;
    std::size_t trials_run = 0;
    bool witness_found = false;
};

struct CellReport {
    rules::RuleId rule;
    axioms::AxiomId axiom;
    CellStatus status = CellStatus::VerifiedPass;
    std::optional<axioms::Witness> witness;
    std::string witness_source;  // "fixture:<id>" or "search"
    bool witness_replays = false;
    std::vector<RangeEvidence> pass_evidence;
    std::vector<RangeEvidence> open_evidence;
    bool consistent = true;
    std::string detail;
};

/// Audits one cell: fixture refutations first, then randomized search over
/// each validity sub-range. `consistent` reports agreement with the
/// published verdict inside every range probed.
CellReport audit_cell(rules::RuleId rule, axioms::AxiomId axiom, const AuditConfig& cfg);

struct AuditReport {
    AuditConfig config;
    std::vector<CellReport> cells;
    bool consistent = true;
    double wall_seconds = 0;
};

/// Runs all 80 cells (parallelized, deterministic per cell).
AuditReport run_table1(const AuditConfig& cfg);

std::string render_text(const AuditReport& report);
std::string cell_to_json(const CellReport& cell);
std::string to_json(const AuditReport& report);

}  // namespace portion::audit
