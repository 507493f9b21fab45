#include "tabint/program.hpp"

#include <algorithm>
#include <sstream>

namespace tabint {

namespace {

void collect_var_names(const Term& t, std::map<VarId, std::string>& out) {
    if (t.is_var())
        out.emplace(t.var_id(), t.name());
    else
        for (const Term& a : t.args())
            collect_var_names(a, out);
}

} // namespace

std::string EntryDecl::str() const {
    std::ostringstream os;
    os << term_to_string(goal);
    if (!props.empty()) {
        std::map<VarId, std::string> names;
        collect_var_names(goal, names);
        os << " : [";
        bool first = true;
        for (VarId v : goal.vars()) {
            auto it = props.find(v);
            if (it == props.end())
                continue;
            if (!first)
                os << ',';
            first = false;
            switch (it->second) {
            case ArgProp::Ground: os << "ground("; break;
            case ArgProp::Free: os << "free("; break;
            case ArgProp::Any: os << "any("; break;
            }
            os << names[v] << ')';
        }
        os << ']';
    }
    return os.str();
}

std::optional<Builtin> builtin_of(const PredKey& k) {
    if (k.arity == 0) {
        if (k.name == "true")
            return Builtin::True;
        if (k.name == "fail" || k.name == "false")
            return Builtin::Fail;
        return std::nullopt;
    }
    if (k.arity != 2)
        return std::nullopt;
    if (k.name == "=")
        return Builtin::Unify;
    if (k.name == "is")
        return Builtin::Is;
    static const char* cmps[] = {"<", ">", "=<", ">=", "=:=", "=\\="};
    for (const char* c : cmps)
        if (k.name == c)
            return Builtin::Cmp;
    return std::nullopt;
}

namespace {

// Iterative Tarjan over the defined-predicate call graph.
struct SccState {
    std::vector<std::vector<int>> adj;
    std::vector<int> index, lowlink, scc;
    std::vector<bool> on_stack;
    std::vector<int> stack;
    int next_index = 0, next_scc = 0;

    void run(int root) {
        struct Frame { int v; size_t edge; };
        std::vector<Frame> frames{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                int w = adj[f.v][f.edge++];
                if (index[w] < 0) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        scc[w] = next_scc;
                    } while (w != f.v);
                    ++next_scc;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
            }
        }
    }
};

} // namespace

void classify_recursion(Program& prog) {
    std::vector<PredKey> keys;
    std::map<PredKey, int> node_of;
    for (const auto& [k, _] : prog.preds) {
        node_of[k] = static_cast<int>(keys.size());
        keys.push_back(k);
    }
    const int n = static_cast<int>(keys.size());

    SccState st;
    st.adj.resize(n);
    std::vector<std::vector<bool>> self_edge(n);
    std::vector<bool> has_self(n, false);
    for (const auto& [k, clauses] : prog.preds) {
        int u = node_of[k];
        for (const Clause& c : clauses) {
            for (const Term& lit : c.body) {
                if (!lit.is_callable())
                    continue;
                PredKey callee = pred_key_of(lit);
                auto it = node_of.find(callee);
                if (it == node_of.end())
                    continue; // builtin or unknown: leaf
                st.adj[u].push_back(it->second);
                if (it->second == u)
                    has_self[u] = true;
            }
        }
    }

    st.index.assign(n, -1);
    st.lowlink.assign(n, -1);
    st.scc.assign(n, -1);
    st.on_stack.assign(n, false);
    for (int v = 0; v < n; ++v)
        if (st.index[v] < 0)
            st.run(v);

    std::vector<int> scc_size(st.next_scc, 0);
    for (int v = 0; v < n; ++v)
        ++scc_size[st.scc[v]];

    prog.recursive_pred.clear();
    prog.scc_index.clear();
    for (int v = 0; v < n; ++v) {
        prog.scc_index[keys[v]] = st.scc[v];
        prog.recursive_pred[keys[v]] = scc_size[st.scc[v]] > 1 || has_self[v];
    }

    for (auto& [k, clauses] : prog.preds) {
        int head_scc = st.scc[node_of[k]];
        bool head_rec = prog.recursive_pred[k];
        for (Clause& c : clauses) {
            c.recursive = false;
            if (!head_rec)
                continue;
            for (const Term& lit : c.body) {
                if (!lit.is_callable())
                    continue;
                auto it = node_of.find(pred_key_of(lit));
                if (it != node_of.end() && st.scc[it->second] == head_scc) {
                    c.recursive = true;
                    break;
                }
            }
        }
    }
}

Clause rename_apart(const Clause& c, VarId* next_fresh) {
    VarId base = *next_fresh;
    auto map_id = [base](VarId v) { return base + v; };
    Clause out;
    out.head = c.head.rename_vars(map_id);
    out.body.reserve(c.body.size());
    for (const Term& lit : c.body)
        out.body.push_back(lit.rename_vars(map_id));
    out.id = c.id;
    out.var_count = c.var_count;
    out.recursive = c.recursive;
    *next_fresh += c.var_count;
    return out;
}

std::string clause_to_string(const Clause& c) {
    std::ostringstream os;
    os << term_to_string(c.head);
    if (!c.body.empty()) {
        os << " :- ";
        for (size_t i = 0; i < c.body.size(); ++i) {
            if (i)
                os << ", ";
            os << term_to_string(c.body[i]);
        }
    }
    os << '.';
    return os.str();
}

} // namespace tabint
