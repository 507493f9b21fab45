#pragma once

#include "tabint/program.hpp"
#include "tabint/tabling/engine.hpp"

#include <map>
#include <string>

namespace tabint {

struct DistResult {
    std::string source;
    // Shortest distance over paths of at least one edge; a node reachable
    // only through cycles back to the source still gets an entry.
    std::map<std::string, long long> dist;
    tabling::EngineStats stats;
};

// Shortest paths from `source` over edge/3 facts, computed by the tabling
// engine with min aggregation instead of lub: one generator keyed by the
// source, one saved answer per reachable node, improvements re-run the
// recursive rule until the table is stable. Edges must be facts
// edge(From, To, Weight) with atom endpoints and non-negative integer
// weights; anything else raises ContractViolation.
DistResult shortest_paths(const Program& graph, const std::string& source);

// First edge origin in source order; ContractViolation if there are no edges.
std::string default_source(const Program& graph);

} // namespace tabint
