#include "tabint/analysis/analyzer.hpp"

#include "tabint/errors.hpp"
#include "tabint/unify.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <utility>

namespace tabint {

namespace {

// A call pattern: goal over canonical variables 0..k-1 plus the projected
// call substitution over exactly those variables. The engine key is the
// rendered goal, so two patterns sharing a key have the same goal shape and
// call entailment reduces to the substitution order.
struct CallPat {
    Term goal;
    Subst proj;
};

} // namespace

struct TabledAnalyzer::Impl {
    using Eng = tabling::Engine<CallPat, Subst>;

    const Program& prog;
    const Domain& dom;
    AnalyzeOptions opts;

    std::unique_ptr<Eng> engine;
    VarId fresh = 0;
    ProgramPoints points;
    std::set<std::string> warnings;

    Impl(const Program& p, const Domain& d, AnalyzeOptions o) : prog(p), dom(d), opts(o) {}

    tabling::AggregateOps<CallPat, Subst> make_ops() const {
        tabling::AggregateOps<CallPat, Subst> ops;
        ops.call_entail = [this](const CallPat& a, const CallPat& b) {
            return dom.leq(a.proj, b.proj);
        };
        ops.answer_entail = [this](const Subst& cand, const Subst& saved) {
            return dom.leq(cand, saved);
        };
        ops.answer_join = [this](const Subst& saved, const Subst& cand) {
            return dom.lub(saved, cand);
        };
        ops.apply_answer = [](const Subst& v) { return v; };
        return ops;
    }

    AnalysisResult analyze(const EntryDecl& entry) {
        tabling::EngineOptions eo;
        eo.policy = opts.resume;
        eo.step_budget = opts.step_budget;
        eo.subsumptive_calls = opts.subsumptive_calls;
        engine = std::make_unique<Eng>(make_ops(), eo);
        fresh = entry.var_count;
        points.clear();
        warnings.clear();

        Subst init = dom.initial_from_entry(entry);
        engine->run([&] { call_to_success(entry.goal, init); });

        AnalysisResult res;
        for (size_t i = 0; i < engine->generator_count(); ++i) {
            const auto& g = engine->generator_at(i);
            const CallPat& pat = g.call();
            std::optional<Subst> ans = engine->answer(g, "");
            res.completes.push_back({pred_key_of(pat.goal), pat.goal, pat.proj,
                                     ans ? *ans : dom.bottom(pat.proj.vars())});
        }
        res.program_points = points;
        const auto& st = engine->stats();
        res.counters.patterns = st.generators;
        res.counters.body_evals = st.body_evals;
        res.counters.suspensions = st.suspensions;
        res.counters.resumptions = st.resumptions;
        res.counters.answers_proposed = st.answers_proposed;
        res.counters.answers_joined = st.answers_joined;
        res.counters.answers_discarded = st.answers_discarded;
        res.warnings.assign(warnings.begin(), warnings.end());
        return res;
    }

    // Abstract call: table lookup / generator creation, then the saved
    // answer (BOTTOM while none exists) renamed back onto the goal.
    Subst call_to_success(const Term& goal, const Subst& proj) {
        if (proj.is_bottom())
            return proj;
        NormalizedCall nc = normalize_call(goal, proj);
        std::string key = term_to_string(nc.goal);
        auto res = engine->tabled_call(key, CallPat{nc.goal, nc.proj},
                                       [this](Eng::Generator& g) { install_units(g); });
        std::optional<Subst> saved = engine->answer(*res.gen, "");
        Subst success = saved ? *saved : dom.bottom(nc.proj.vars());
        return denormalize(success, VarSet::of_term(goal));
    }

    void install_units(Eng::Generator& g) {
        const CallPat& pat = g.call();
        PredKey pk = pred_key_of(pat.goal);
        const std::vector<Clause>* clauses = prog.clauses_of(pk);
        if (!clauses) {
            warnings.insert("unknown predicate " + pk.str() + ": assuming top success");
            engine->add_answer(g, "", dom.top(pat.proj.vars()));
            return;
        }
        std::vector<const Clause*> order(clauses->size());
        std::transform(clauses->begin(), clauses->end(), order.begin(),
                       [](const Clause& c) { return &c; });
        if (opts.seed_nonrecursive && prog.is_recursive(pk))
            std::stable_partition(order.begin(), order.end(),
                                  [](const Clause* c) { return !c->recursive; });
        for (const Clause* c : order) {
            VarId base = fresh;
            Clause inst = rename_apart(*c, &fresh);
            if (!unifiable(pat.goal, inst.head))
                continue;
            g.push_unit([this, &g, inst = std::move(inst), base] { run_clause(g, inst, base); });
        }
    }

    void run_clause(Eng::Generator& g, const Clause& cl, VarId base) {
        const CallPat& pat = g.call();
        Subst entry = dom.call_to_entry(pat.goal, cl, pat.proj);
        Subst exit = entry_to_exit(cl, base, entry);
        if (exit.is_bottom())
            return;
        Subst prime = dom.exit_to_success(pat.proj, pat.goal, cl, exit);
        if (prime.is_bottom())
            return;
        engine->add_answer(g, "", std::move(prime));
    }

    Subst entry_to_exit(const Clause& cl, VarId base, const Subst& entry) {
        std::vector<VarId> all(static_cast<size_t>(cl.var_count));
        for (int i = 0; i < cl.var_count; ++i)
            all[static_cast<size_t>(i)] = base + i;
        Subst lam = dom.project_in(VarSet(std::move(all)), entry);
        record_point(cl, 1, lam);
        for (size_t i = 0; i < cl.body.size(); ++i) {
            lam = step(cl.body[i], lam);
            record_point(cl, static_cast<int>(i) + 2, lam);
        }
        return dom.project_out(VarSet::of_term(cl.head), lam);
    }

    Subst step(const Term& lit, Subst lam) {
        if (lam.is_bottom())
            return lam;
        if (builtin_of(pred_key_of(lit)))
            return dom.builtin_transfer(lit, lam);
        Subst proj = dom.project_out(VarSet::of_term(lit), lam);
        Subst prime = call_to_success(lit, proj);
        return dom.extend(lam, prime);
    }

    // Program points live over the source clause ids; the instance scope
    // base + i maps back to i positionally.
    void record_point(const Clause& cl, int pos, const Subst& lam) {
        std::vector<VarId> src(static_cast<size_t>(cl.var_count));
        for (int i = 0; i < cl.var_count; ++i)
            src[static_cast<size_t>(i)] = i;
        Subst over_src = dom.rename(lam, VarSet(std::move(src)));
        auto key = std::make_pair(cl.id, pos);
        auto it = points.find(key);
        if (it == points.end())
            points.emplace(key, std::move(over_src));
        else
            it->second = dom.lub(it->second, over_src);
    }
};

TabledAnalyzer::TabledAnalyzer(const Program& prog, const Domain& dom, AnalyzeOptions opts)
    : impl_(std::make_unique<Impl>(prog, dom, opts)) {}

TabledAnalyzer::~TabledAnalyzer() = default;

AnalysisResult TabledAnalyzer::analyze(const EntryDecl& entry) {
    return impl_->analyze(entry);
}

ReplayOutcome TabledAnalyzer::replay() {
    if (!impl_->engine)
        throw ContractViolation("replay requires a prior analyze call");
    auto rep = impl_->engine->replay();
    return {rep.updates, rep.new_patterns};
}

AnalysisResult analyze_tabled(const Program& prog, const EntryDecl& entry, const Domain& dom,
                              AnalyzeOptions opts) {
    TabledAnalyzer a(prog, dom, opts);
    return a.analyze(entry);
}

} // namespace tabint
