#pragma once

#include "tabint/analysis/result.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tabint {

// Builds the run report for one program: merges the per-entry results
// (one AnalysisResult per prog.entries element, same order), deduplicates
// completes and sorts them by (predicate, goal, call) so the rendered
// completes section is byte-comparable across engines. Every substitution
// is stored both structured and pre-rendered, which keeps the text
// rendering a pure function of the JSON document.
nlohmann::json make_report(const std::string& program_label, const std::string& domain_name,
                           const std::string& engine_name, const Program& prog, const Domain& dom,
                           const std::vector<AnalysisResult>& per_entry, double wall_ms);

// The "completes:" block alone, identical across engines on agreement.
std::string render_completes_section(const nlohmann::json& report);

std::string render_report_text(const nlohmann::json& report, bool with_points = false);

} // namespace tabint
