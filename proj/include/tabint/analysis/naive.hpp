#pragma once

#include "tabint/analysis/result.hpp"

#include <cstdint>

namespace tabint {

struct NaiveOptions {
    // Whole-pattern evaluations (first runs and restarts combined).
    std::uint64_t eval_budget = 1'000'000;
};

// Reference fixpoint: a memo table of call patterns with version-stamped
// dependency lists. A pattern whose recorded dependencies moved on is
// re-evaluated from scratch (all clauses, whole bodies) until nothing is
// stale. Deliberately coarse; exists to cross-check the tabled analyzer.
AnalysisResult analyze_naive(const Program& prog, const EntryDecl& entry, const Domain& dom,
                             NaiveOptions opts = {});

} // namespace tabint
