#pragma once

#include "tabint/analysis/result.hpp"
#include "tabint/tabling/engine.hpp"

#include <cstdint>
#include <memory>

namespace tabint {

struct AnalyzeOptions {
    tabling::ResumePolicy resume = tabling::ResumePolicy::Lifo;
    // Evaluate non-recursive clauses of a recursive predicate first so the
    // table is seeded before any self-dependent clause suspends.
    bool seed_nonrecursive = true;
    bool subsumptive_calls = false;
    std::uint64_t step_budget = 10'000'000;
};

struct ReplayOutcome {
    std::uint64_t updates = 0;      // answers that would still change
    std::uint64_t new_patterns = 0; // calls missing from the final table
};

// Goal-dependent analysis driven by the tabling engine: one generator per
// call pattern, one body unit per head-matching clause, answers aggregated
// to a single lub per pattern. Keep the analyzer alive to replay the
// finished table afterwards.
class TabledAnalyzer {
public:
    TabledAnalyzer(const Program& prog, const Domain& dom, AnalyzeOptions opts = {});
    ~TabledAnalyzer();

    AnalysisResult analyze(const EntryDecl& entry);
    // Re-evaluates every pattern body against the finished table without
    // mutating it; a sound fixpoint reports all zeros.
    ReplayOutcome replay();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

AnalysisResult analyze_tabled(const Program& prog, const EntryDecl& entry, const Domain& dom,
                              AnalyzeOptions opts = {});

} // namespace tabint
