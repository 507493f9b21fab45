#include "tabint/analysis/differential.hpp"

#include <map>

namespace tabint {

namespace {

std::string pattern_label(const CompleteEntry& ce, const Domain& dom) {
    auto namer = [](VarId v) { return canonical_var_name(static_cast<int>(v)); };
    return term_to_string(ce.goal) + " : " + dom.render(ce.call, namer);
}

} // namespace

DiffReport compare_completes(const AnalysisResult& a, const AnalysisResult& b, const Domain& dom) {
    DiffReport rep;
    std::map<std::string, std::vector<size_t>> b_index;
    for (size_t i = 0; i < b.completes.size(); ++i)
        b_index[term_to_string(b.completes[i].goal)].push_back(i);

    std::vector<bool> matched(b.completes.size(), false);
    for (const CompleteEntry& ca : a.completes) {
        const CompleteEntry* hit = nullptr;
        for (size_t i : b_index[term_to_string(ca.goal)]) {
            if (matched[i])
                continue;
            if (dom.identical(b.completes[i].call, ca.call)) {
                matched[i] = true;
                hit = &b.completes[i];
                break;
            }
        }
        if (!hit) {
            rep.equal = false;
            rep.mismatches.push_back("pattern only on the left: " + pattern_label(ca, dom));
            continue;
        }
        if (!dom.identical(hit->success, ca.success)) {
            auto namer = [](VarId v) { return canonical_var_name(static_cast<int>(v)); };
            rep.equal = false;
            rep.mismatches.push_back("success differs for " + pattern_label(ca, dom) + ": " +
                                     dom.render(ca.success, namer) + " vs " +
                                     dom.render(hit->success, namer));
        }
    }
    for (size_t i = 0; i < b.completes.size(); ++i) {
        if (!matched[i]) {
            rep.equal = false;
            rep.mismatches.push_back("pattern only on the right: " +
                                     pattern_label(b.completes[i], dom));
        }
    }
    return rep;
}

} // namespace tabint
