#include "tabint/analysis/dist.hpp"

#include "tabint/errors.hpp"

#include <algorithm>
#include <vector>

namespace tabint {

namespace {

using EdgeMap = std::map<std::string, std::vector<std::pair<std::string, long long>>>;

EdgeMap load_edges(const Program& graph) {
    const std::vector<Clause>* facts = graph.clauses_of(PredKey{"edge", 3});
    if (!facts)
        throw ContractViolation("graph program must define edge/3 facts");
    EdgeMap edges;
    for (const Clause& c : *facts) {
        if (!c.body.empty())
            throw ContractViolation("edge/3 must consist of facts");
        const Term& from = c.head.args()[0];
        const Term& to = c.head.args()[1];
        const Term& w = c.head.args()[2];
        if (!from.is_atom() || !to.is_atom() || !w.is_int())
            throw ContractViolation("edge/3 arguments must be (atom, atom, integer)");
        if (w.int_value() < 0)
            throw ContractViolation("edge weights must be non-negative");
        edges[from.name()].emplace_back(to.name(), w.int_value());
    }
    return edges;
}

} // namespace

std::string default_source(const Program& graph) {
    const std::vector<Clause>* facts = graph.clauses_of(PredKey{"edge", 3});
    if (!facts || facts->empty())
        throw ContractViolation("graph program has no edge/3 facts");
    const Term& from = facts->front().head.args()[0];
    if (!from.is_atom())
        throw ContractViolation("edge/3 arguments must be (atom, atom, integer)");
    return from.name();
}

DistResult shortest_paths(const Program& graph, const std::string& source) {
    EdgeMap edges = load_edges(graph);

    using Eng = tabling::Engine<std::string, long long>;
    tabling::AggregateOps<std::string, long long> ops;
    ops.call_entail = [](const std::string& a, const std::string& b) { return a == b; };
    ops.answer_entail = [](const long long& cand, const long long& saved) {
        return cand >= saved;
    };
    ops.answer_join = [](const long long& saved, const long long& cand) {
        return std::min(saved, cand);
    };
    ops.apply_answer = [](const long long& v) { return v; };
    Eng eng(std::move(ops));

    Eng::Generator* root = nullptr;
    eng.run([&] {
        auto res = eng.tabled_call(source, source, [&](Eng::Generator& g) {
            // dist(S, Y, D) :- dist(S, Z, D1), edge(Z, Y, D2), D is D1 + D2.
            g.push_unit([&eng, &g, &edges] {
                auto self = eng.tabled_call(g.call(), g.call(), [](Eng::Generator&) {});
                for (const auto& [z, d1] : eng.answers(*self.gen)) {
                    auto it = edges.find(z);
                    if (it == edges.end())
                        continue;
                    for (const auto& [y, w] : it->second)
                        eng.add_answer(g, y, d1 + w);
                }
            });
            // dist(S, Y, D) :- edge(S, Y, D).
            g.push_unit([&eng, &g, &edges] {
                auto it = edges.find(g.call());
                if (it == edges.end())
                    return;
                for (const auto& [y, w] : it->second)
                    eng.add_answer(g, y, w);
            });
        });
        root = res.gen;
    });

    DistResult out;
    out.source = source;
    for (const auto& [node, d] : eng.answers(*root))
        out.dist[node] = d;
    out.stats = eng.stats();
    return out;
}

} // namespace tabint
