#pragma once

#include "tabint/lattice.hpp"
#include "tabint/program.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tabint {

// One finished call pattern. The goal is normalized to canonical variables
// 0..k-1 in first-occurrence order; call and success range over exactly
// those variables. A pattern that cannot succeed carries a BOTTOM success.
struct CompleteEntry {
    PredKey pred;
    Term goal;
    Subst call;
    Subst success;
};

struct AnalysisCounters {
    std::uint64_t patterns = 0;   // distinct call patterns evaluated
    std::uint64_t body_evals = 0; // clause body traversals, re-runs included
    std::uint64_t suspensions = 0;
    std::uint64_t resumptions = 0;
    std::uint64_t answers_proposed = 0;
    std::uint64_t answers_joined = 0;
    std::uint64_t answers_discarded = 0;
    std::uint64_t restarts = 0; // naive engine only: whole-pattern re-evaluations
};

// Key: (clause id, position). Position i in 1..m is the point just before
// body literal i; position m+1 is the clause exit. Values range over the
// source clause variables 0..var_count-1 and accumulate by lub across
// traversals.
using ProgramPoints = std::map<std::pair<int, int>, Subst>;

struct AnalysisResult {
    std::vector<CompleteEntry> completes; // pattern creation order
    ProgramPoints program_points;
    AnalysisCounters counters;
    std::vector<std::string> warnings; // deduplicated, sorted
};

} // namespace tabint
