#pragma once

#include "tabint/analysis/result.hpp"
#include "tabint/lattice.hpp"
#include "tabint/program.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tabint {

struct SldOptions {
    int depth = 6;              // user-predicate call nesting bound
    int max_term_size = 500;    // prune branches growing beyond this
    std::size_t max_solutions = 20000;
    std::uint64_t max_steps = 5'000'000; // explored resolution nodes
};

// Depth-bounded resolution with occurs check. Returns the distinct
// solutions reachable within the bounds, each as a binding over vars(goal).
// Unbound runtime cells are renamed to canonical placeholder variables,
// consistently across the whole solution so aliasing stays visible.
std::vector<ConcreteBinding> sld_solutions(const Program& prog, const Term& goal,
                                           const SldOptions& opts = {});

struct SoundnessReport {
    std::uint64_t instances = 0;
    std::uint64_t solutions = 0;
    std::uint64_t violations = 0;
    std::vector<std::string> details; // first few violations, rendered
};

// Concrete cross-check of one analyzed entry: samples goal instances
// consistent with the declared properties, enumerates their depth-bounded
// solutions, and tests each against the analyzed success substitution.
SoundnessReport check_soundness(const Program& prog, const EntryDecl& entry, const Domain& dom,
                                const AnalysisResult& analysis, const SldOptions& opts = {});

} // namespace tabint
