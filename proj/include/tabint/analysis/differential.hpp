#pragma once

#include "tabint/analysis/result.hpp"

#include <string>
#include <vector>

namespace tabint {

struct DiffReport {
    bool equal = true;
    std::vector<std::string> mismatches;
};

// Set comparison of two complete tables: every call pattern of one side
// must appear on the other (same goal shape, semantically identical call)
// with a semantically identical success. Creation order is ignored.
DiffReport compare_completes(const AnalysisResult& a, const AnalysisResult& b, const Domain& dom);

} // namespace tabint
