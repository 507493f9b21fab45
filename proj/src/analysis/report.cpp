#include "tabint/analysis/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace tabint {

namespace {

VarNamer canonical_namer() {
    return [](VarId v) { return canonical_var_name(static_cast<int>(v)); };
}

void collect_names(const Term& t, std::map<VarId, std::string>& out) {
    if (t.is_var()) {
        out.emplace(t.var_id(), t.name());
        return;
    }
    for (const Term& a : t.args())
        collect_names(a, out);
}

// Source display names, falling back to _G<id> for anonymous or clashing
// names so the rendering stays injective.
VarNamer clause_namer(const Clause& c) {
    std::map<VarId, std::string> names;
    collect_names(c.head, names);
    for (const Term& lit : c.body)
        collect_names(lit, names);
    std::map<std::string, int> uses;
    for (const auto& [v, n] : names) {
        (void)v;
        ++uses[n];
    }
    auto shared = std::make_shared<std::map<VarId, std::string>>();
    for (const auto& [v, n] : names) {
        if (n.empty() || n == "_" || uses[n] > 1)
            (*shared)[v] = "_G" + std::to_string(v);
        else
            (*shared)[v] = n;
    }
    return [shared](VarId v) {
        auto it = shared->find(v);
        return it == shared->end() ? "_G" + std::to_string(v) : it->second;
    };
}

std::vector<const Clause*> clauses_by_id(const Program& prog) {
    std::vector<const Clause*> out;
    for (const auto& [key, clauses] : prog.preds) {
        (void)key;
        for (const Clause& c : clauses) {
            if (static_cast<size_t>(c.id) >= out.size())
                out.resize(static_cast<size_t>(c.id) + 1, nullptr);
            out[static_cast<size_t>(c.id)] = &c;
        }
    }
    return out;
}

} // namespace

nlohmann::json make_report(const std::string& program_label, const std::string& domain_name,
                           const std::string& engine_name, const Program& prog, const Domain& dom,
                           const std::vector<AnalysisResult>& per_entry, double wall_ms) {
    nlohmann::json rep;
    rep["program"] = program_label;
    rep["domain"] = domain_name;
    rep["engine"] = engine_name;
    rep["wall_ms"] = wall_ms;

    nlohmann::json entries = nlohmann::json::array();
    for (const EntryDecl& e : prog.entries)
        entries.push_back(e.str());
    rep["entries"] = entries;

    VarNamer namer = canonical_namer();

    // Dedup across entries; the same pattern reached from two entries has
    // the same fixpoint answer, so the full line is the key.
    std::set<std::string> seen;
    std::vector<nlohmann::json> rows;
    for (const AnalysisResult& res : per_entry) {
        for (const CompleteEntry& ce : res.completes) {
            nlohmann::json row;
            row["pred"] = ce.pred.str();
            row["goal"] = term_to_string(ce.goal);
            row["call"] = dom.to_json(ce.call, namer);
            row["call_text"] = dom.render(ce.call, namer);
            row["success"] = dom.to_json(ce.success, namer);
            row["success_text"] = dom.render(ce.success, namer);
            std::string key = row["pred"].get<std::string>() + "|" +
                              row["goal"].get<std::string>() + "|" +
                              row["call_text"].get<std::string>() + "|" +
                              row["success_text"].get<std::string>();
            if (seen.insert(key).second)
                rows.push_back(std::move(row));
        }
    }
    std::sort(rows.begin(), rows.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
        auto ka = std::make_tuple(a["pred"].get<std::string>(), a["goal"].get<std::string>(),
                                  a["call_text"].get<std::string>());
        auto kb = std::make_tuple(b["pred"].get<std::string>(), b["goal"].get<std::string>(),
                                  b["call_text"].get<std::string>());
        return ka < kb;
    });
    rep["completes"] = rows;

    // Merge program points across entries by lub.
    ProgramPoints merged;
    for (const AnalysisResult& res : per_entry) {
        for (const auto& [key, subst] : res.program_points) {
            auto it = merged.find(key);
            if (it == merged.end())
                merged.emplace(key, subst);
            else
                it->second = dom.lub(it->second, subst);
        }
    }
    std::vector<const Clause*> by_id = clauses_by_id(prog);
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [key, subst] : merged) {
        const Clause* src = static_cast<size_t>(key.first) < by_id.size()
                                ? by_id[static_cast<size_t>(key.first)]
                                : nullptr;
        VarNamer pn = src ? clause_namer(*src) : namer;
        nlohmann::json row;
        row["clause"] = key.first;
        row["position"] = key.second;
        if (src)
            row["clause_text"] = clause_to_string(*src);
        row["subst"] = dom.to_json(subst, pn);
        row["subst_text"] = dom.render(subst, pn);
        points.push_back(std::move(row));
    }
    rep["program_points"] = points;

    AnalysisCounters sum;
    std::set<std::string> warnings;
    for (const AnalysisResult& res : per_entry) {
        sum.patterns += res.counters.patterns;
        sum.body_evals += res.counters.body_evals;
        sum.suspensions += res.counters.suspensions;
        sum.resumptions += res.counters.resumptions;
        sum.answers_proposed += res.counters.answers_proposed;
        sum.answers_joined += res.counters.answers_joined;
        sum.answers_discarded += res.counters.answers_discarded;
        sum.restarts += res.counters.restarts;
        warnings.insert(res.warnings.begin(), res.warnings.end());
    }
    rep["counters"] = {{"patterns", sum.patterns},
                       {"body_evals", sum.body_evals},
                       {"suspensions", sum.suspensions},
                       {"resumptions", sum.resumptions},
                       {"answers_proposed", sum.answers_proposed},
                       {"answers_joined", sum.answers_joined},
                       {"answers_discarded", sum.answers_discarded},
                       {"restarts", sum.restarts}};
    rep["warnings"] = std::vector<std::string>(warnings.begin(), warnings.end());
    return rep;
}

std::string render_completes_section(const nlohmann::json& report) {
    std::ostringstream os;
    os << "completes:\n";
    for (const auto& row : report.at("completes")) {
        os << "  " << row.at("pred").get<std::string>() << " : "
           << row.at("goal").get<std::string>() << " : " << row.at("call_text").get<std::string>()
           << " -> " << row.at("success_text").get<std::string>() << "\n";
    }
    return os.str();
}

std::string render_report_text(const nlohmann::json& report, bool with_points) {
    std::ostringstream os;
    os << "program: " << report.at("program").get<std::string>() << "\n";
    os << "domain: " << report.at("domain").get<std::string>() << "\n";
    os << "engine: " << report.at("engine").get<std::string>() << "\n";
    os << "entries:\n";
    for (const auto& e : report.at("entries"))
        os << "  " << e.get<std::string>() << "\n";
    os << render_completes_section(report);
    if (with_points) {
        os << "program points:\n";
        for (const auto& row : report.at("program_points")) {
            os << "  clause " << row.at("clause").get<int>() << " pos "
               << row.at("position").get<int>() << ": " << row.at("subst_text").get<std::string>()
               << "\n";
        }
    }
    const auto& w = report.at("warnings");
    if (w.empty()) {
        os << "warnings: (none)\n";
    } else {
        os << "warnings:\n";
        for (const auto& line : w)
            os << "  " << line.get<std::string>() << "\n";
    }
    const auto& c = report.at("counters");
    os << "counters:";
    for (const char* k : {"patterns", "body_evals", "suspensions", "resumptions",
                          "answers_proposed", "answers_joined", "answers_discarded", "restarts"})
        os << " " << k << "=" << c.at(k).get<std::uint64_t>();
    os << "\n";
    os << "wall_ms: " << std::fixed << std::setprecision(3)
       << report.at("wall_ms").get<double>() << "\n";
    return os.str();
}

} // namespace tabint
