#include "tabint/analysis/naive.hpp"

#include "tabint/errors.hpp"
#include "tabint/unify.hpp"

#include <memory>
#include <optional>
#include <set>
#include <utility>

namespace tabint {

namespace {

struct MemoEntry {
    Term goal;  // canonical variables 0..k-1
    Subst proj; // over exactly those variables
    std::optional<Subst> answer;
    std::uint64_t version = 0;
    // (pattern index, version seen) at the last evaluation.
    std::vector<std::pair<size_t, std::uint64_t>> deps;
    bool evaluated = false;
};

struct Fixpoint {
    const Program& prog;
    const Domain& dom;
    NaiveOptions opts;

    std::vector<std::unique_ptr<MemoEntry>> table;
    std::map<std::string, std::vector<size_t>> index;
    VarId fresh;
    ProgramPoints points;
    std::set<std::string> warnings;
    AnalysisCounters counters;
    size_t current = 0;
    std::uint64_t evals = 0;

    Fixpoint(const Program& p, const Domain& d, NaiveOptions o) : prog(p), dom(d), opts(o) {}

    size_t find_or_create(const Term& goal_norm, const Subst& proj_norm) {
        std::string key = term_to_string(goal_norm);
        for (size_t idx : index[key])
            if (dom.identical(table[idx]->proj, proj_norm))
                return idx;
        auto e = std::make_unique<MemoEntry>();
        e->goal = goal_norm;
        e->proj = proj_norm;
        size_t idx = table.size();
        table.push_back(std::move(e));
        index[key].push_back(idx);
        ++counters.patterns;
        PredKey pk = pred_key_of(goal_norm);
        if (!prog.clauses_of(pk)) {
            warnings.insert("unknown predicate " + pk.str() + ": assuming top success");
            table[idx]->answer = dom.top(proj_norm.vars());
            table[idx]->version = 1;
            table[idx]->evaluated = true;
        }
        return idx;
    }

    bool stale(const MemoEntry& e) const {
        for (auto [idx, ver] : e.deps)
            if (table[idx]->version != ver)
                return true;
        return false;
    }

    void run(const EntryDecl& entry) {
        fresh = entry.var_count;
        Subst init = dom.initial_from_entry(entry);
        NormalizedCall nc = normalize_call(entry.goal, init);
        find_or_create(nc.goal, nc.proj);
        for (;;) {
            size_t pick = table.size();
            for (size_t i = 0; i < table.size(); ++i) {
                if (!table[i]->evaluated || stale(*table[i])) {
                    pick = i;
                    break;
                }
            }
            if (pick == table.size())
                break;
            evaluate(pick);
        }
    }

    void evaluate(size_t idx) {
        if (++evals > opts.eval_budget)
            throw ResourceLimitError("naive fixpoint evaluation budget exceeded");
        MemoEntry& e = *table[idx];
        if (e.evaluated)
            ++counters.restarts;
        e.deps.clear();
        size_t saved_current = current;
        current = idx;

        const std::vector<Clause>& clauses = *prog.clauses_of(pred_key_of(e.goal));
        std::optional<Subst> candidate;
        for (const Clause& c : clauses) {
            VarId base = fresh;
            Clause inst = rename_apart(c, &fresh);
            if (!unifiable(e.goal, inst.head))
                continue;
            ++counters.body_evals;
            Subst prime = clause_success(e, inst, base);
            if (prime.is_bottom())
                continue;
            candidate = candidate ? dom.lub(*candidate, prime) : prime;
        }

        current = saved_current;
        e.evaluated = true;
        if (candidate && (!e.answer || !dom.leq(*candidate, *e.answer))) {
            e.answer = e.answer ? dom.lub(*e.answer, *candidate) : *candidate;
            ++e.version;
        }
    }

    Subst clause_success(const MemoEntry& e, const Clause& inst, VarId base) {
        Subst entry = dom.call_to_entry(e.goal, inst, e.proj);
        std::vector<VarId> scope(static_cast<size_t>(inst.var_count));
        for (int i = 0; i < inst.var_count; ++i)
            scope[static_cast<size_t>(i)] = base + i;
        Subst lam = dom.project_in(VarSet(std::move(scope)), entry);
        merge_point(inst, 1, lam);
        int pos = 2;
        for (const Term& lit : inst.body) {
            if (!lam.is_bottom()) {
                if (builtin_of(pred_key_of(lit))) {
                    lam = dom.builtin_transfer(lit, lam);
                } else {
                    Subst proj = dom.project_out(VarSet::of_term(lit), lam);
                    Subst prime = lookup_success(lit, proj);
                    lam = dom.extend(lam, prime);
                }
            }
            merge_point(inst, pos++, lam);
        }
        Subst exit = dom.project_out(VarSet::of_term(inst.head), lam);
        if (exit.is_bottom())
            return dom.bottom(e.proj.vars());
        return dom.exit_to_success(e.proj, e.goal, inst, exit);
    }

    // Reads the current table value of the pattern behind `lit`, creating
    // the pattern if new, and records the dependency with the version seen.
    Subst lookup_success(const Term& lit, const Subst& proj) {
        if (proj.is_bottom())
            return proj;
        NormalizedCall nc = normalize_call(lit, proj);
        size_t idx = find_or_create(nc.goal, nc.proj);
        MemoEntry& dep = *table[idx];
        table[current]->deps.emplace_back(idx, dep.version);
        Subst saved = dep.answer ? *dep.answer : dom.bottom(nc.proj.vars());
        return denormalize(saved, VarSet::of_term(lit));
    }

    void merge_point(const Clause& inst, int pos, const Subst& lam) {
        std::vector<VarId> src(static_cast<size_t>(inst.var_count));
        for (int i = 0; i < inst.var_count; ++i)
            src[static_cast<size_t>(i)] = i;
        Subst over_src = dom.rename(lam, VarSet(std::move(src)));
        auto key = std::make_pair(inst.id, pos);
        auto it = points.find(key);
        if (it == points.end())
            points.emplace(key, std::move(over_src));
        else
            it->second = dom.lub(it->second, over_src);
    }

    AnalysisResult result() const {
        AnalysisResult res;
        for (const auto& e : table)
            res.completes.push_back({pred_key_of(e->goal), e->goal, e->proj,
                                     e->answer ? *e->answer : dom.bottom(e->proj.vars())});
        res.program_points = points;
        res.counters = counters;
        res.warnings.assign(warnings.begin(), warnings.end());
        return res;
    }
};

} // namespace

AnalysisResult analyze_naive(const Program& prog, const EntryDecl& entry, const Domain& dom,
                             NaiveOptions opts) {
    Fixpoint fp(prog, dom, opts);
    fp.run(entry);
    return fp.result();
}

} // namespace tabint
