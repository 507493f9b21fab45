#include "tabint/analysis/sld.hpp"

#include "tabint/errors.hpp"
#include "tabint/unify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

namespace tabint {

namespace {

std::optional<long long> eval_arith(const Term& t, const Bindings& b) {
    Term r = b.walk(t);
    if (r.is_int())
        return r.int_value();
    if (r.is_var() || r.is_atom())
        return std::nullopt;
    const std::string& f = r.name();
    if (r.arity() == 1 && f == "-") {
        auto v = eval_arith(r.args()[0], b);
        if (!v)
            return std::nullopt;
        return -*v;
    }
    if (r.arity() != 2)
        return std::nullopt;
    auto l = eval_arith(r.args()[0], b);
    auto rr = eval_arith(r.args()[1], b);
    if (!l || !rr)
        return std::nullopt;
    if (f == "+")
        return *l + *rr;
    if (f == "-")
        return *l - *rr;
    if (f == "*")
        return *l * *rr;
    if ((f == "//" || f == "mod") && *rr != 0)
        return f == "//" ? *l / *rr : *l % *rr;
    return std::nullopt;
}

bool cmp_holds(const std::string& op, long long l, long long r) {
    if (op == "<")
        return l < r;
    if (op == ">")
        return l > r;
    if (op == "=<")
        return l <= r;
    if (op == ">=")
        return l >= r;
    if (op == "=:=")
        return l == r;
    if (op == "=\\=")
        return l != r;
    return false;
}

struct Frame {
    Term lit;
    int depth;
};

constexpr VarId kPlaceholderBase = 1'000'000;

struct Search {
    const Program& prog;
    const SldOptions& opts;
    std::vector<VarId> goal_vars;
    VarId fresh;
    std::uint64_t steps = 0;
    std::vector<ConcreteBinding> out;
    std::set<std::string> seen;

    bool full() const { return out.size() >= opts.max_solutions; }

    void solve(std::vector<Frame> goals, const Bindings& b) {
        if (full())
            return;
        if (++steps > opts.max_steps)
            throw ResourceLimitError("resolution step limit exceeded");
        if (goals.empty()) {
            emit(b);
            return;
        }
        Frame f = goals.back();
        goals.pop_back();
        Term lit = b.walk(f.lit);
        if (!lit.is_callable())
            return; // unbound or numeric goal: prune
        PredKey pk = pred_key_of(lit);

        if (auto bi = builtin_of(pk)) {
            switch (*bi) {
            case Builtin::True:
                solve(std::move(goals), b);
                return;
            case Builtin::Fail:
                return;
            case Builtin::Unify: {
                Bindings nb = b;
                if (unify(lit.args()[0], lit.args()[1], nb, true))
                    solve(std::move(goals), nb);
                return;
            }
            case Builtin::Is: {
                auto v = eval_arith(lit.args()[1], b);
                if (!v)
                    return;
                Bindings nb = b;
                if (unify(lit.args()[0], Term::integer(*v), nb, true))
                    solve(std::move(goals), nb);
                return;
            }
            case Builtin::Cmp: {
                auto l = eval_arith(lit.args()[0], b);
                auto r = eval_arith(lit.args()[1], b);
                if (l && r && cmp_holds(pk.name, *l, *r))
                    solve(std::move(goals), b);
                return;
            }
            }
        }

        if (f.depth <= 0)
            return; // bound reached: prune, do not fail
        const std::vector<Clause>* clauses = prog.clauses_of(pk);
        if (!clauses)
            return;
        for (const Clause& c : *clauses) {
            if (full())
                return;
            Clause inst = rename_apart(c, &fresh);
            Bindings nb = b;
            if (!unify(lit, inst.head, nb, true))
                continue;
            if (nb.resolve(inst.head).size() > opts.max_term_size)
                continue;
            std::vector<Frame> next = goals;
            for (auto it = inst.body.rbegin(); it != inst.body.rend(); ++it)
                next.push_back({*it, f.depth - 1});
            solve(std::move(next), nb);
        }
    }

    void emit(const Bindings& b) {
        ConcreteBinding sol;
        std::map<VarId, VarId> canon;
        for (VarId v : goal_vars) {
            Term t = b.resolve(Term::var(v, canonical_var_name(static_cast<int>(v))));
            sol[v] = canonicalize(t, canon);
        }
        std::ostringstream sig;
        for (const auto& [v, t] : sol)
            sig << v << '=' << term_to_string(t) << ';';
        if (seen.insert(sig.str()).second)
            out.push_back(std::move(sol));
    }

    // Renames leftover runtime cells to placeholder ids in first-occurrence
    // order, shared across the whole solution.
    static Term canonicalize(const Term& t, std::map<VarId, VarId>& canon) {
        if (t.is_var()) {
            auto it = canon.find(t.var_id());
            if (it == canon.end())
                it = canon.emplace(t.var_id(),
                                   kPlaceholderBase + static_cast<VarId>(canon.size())).first;
            return Term::var(it->second, "_" + std::to_string(it->second - kPlaceholderBase));
        }
        if (!t.is_compound())
            return t;
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term& a : t.args())
            args.push_back(canonicalize(a, canon));
        return Term::compound(t.name(), std::move(args));
    }
};

Term apply_map(const Term& t, const std::map<VarId, Term>& m) {
    if (t.is_var()) {
        auto it = m.find(t.var_id());
        return it == m.end() ? t : it->second;
    }
    if (!t.is_compound())
        return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args())
        args.push_back(apply_map(a, m));
    return Term::compound(t.name(), std::move(args));
}

// Small deterministic pool of ground terms drawn from the program text:
// constants first, then depth-one combinations over the seen functors.
std::vector<Term> ground_pool(const Program& prog) {
    std::set<std::string> atom_names;
    std::set<long long> ints;
    std::map<std::string, int> functors;
    std::function<void(const Term&)> walk = [&](const Term& t) {
        if (t.is_atom()) {
            atom_names.insert(t.name());
        } else if (t.is_int()) {
            ints.insert(t.int_value());
        } else if (t.is_compound()) {
            functors[t.name()] = t.arity();
            for (const Term& a : t.args())
                walk(a);
        }
    };
    for (const auto& [key, clauses] : prog.preds) {
        (void)key;
        for (const Clause& c : clauses) {
            walk(c.head);
            for (const Term& lit : c.body)
                walk(lit);
        }
    }
    std::vector<Term> pool;
    pool.push_back(Term::atom("[]"));
    for (const std::string& a : atom_names) {
        if (a != "[]" && pool.size() < 4)
            pool.push_back(Term::atom(a));
    }
    for (long long v : ints) {
        if (pool.size() < 6)
            pool.push_back(Term::integer(v));
    }
    if (pool.size() < 3)
        pool.push_back(Term::integer(1));
    std::vector<Term> combos;
    for (const auto& [name, arity] : functors) {
        if (combos.size() >= 3)
            break;
        std::vector<Term> args;
        for (int i = 0; i < arity; ++i)
            args.push_back(pool[static_cast<size_t>(i) % pool.size()]);
        combos.push_back(Term::compound(name, std::move(args)));
    }
    pool.insert(pool.end(), combos.begin(), combos.end());
    return pool;
}

} // namespace

std::vector<ConcreteBinding> sld_solutions(const Program& prog, const Term& goal,
                                           const SldOptions& opts) {
    Search s{prog, opts, goal.vars(), 0, 0, {}, {}};
    VarId maxv = 0;
    for (VarId v : s.goal_vars)
        maxv = std::max(maxv, v + 1);
    s.fresh = maxv;
    s.solve({Frame{goal, opts.depth}}, Bindings{});
    return s.out;
}

SoundnessReport check_soundness(const Program& prog, const EntryDecl& entry, const Domain& dom,
                                const AnalysisResult& analysis, const SldOptions& opts) {
    SoundnessReport rep;

    // Locate the entry pattern in the completes table.
    Subst init = dom.initial_from_entry(entry);
    NormalizedCall nc = normalize_call(entry.goal, init);
    std::string goal_text = term_to_string(nc.goal);
    const CompleteEntry* root = nullptr;
    for (const CompleteEntry& ce : analysis.completes) {
        if (term_to_string(ce.goal) == goal_text && dom.identical(ce.call, nc.proj)) {
            root = &ce;
            break;
        }
    }
    if (!root)
        throw ContractViolation("analysis result lacks the entry call pattern");
    // The analyzed pattern uses canonical ids 0..k-1 in goal first-occurrence
    // order; entry goals are standardized the same way, so ids line up.
    const Subst& success = root->success;

    VarSet entry_vars = VarSet::of_term(entry.goal);
    std::vector<VarId> sampled; // variables receiving a pool term
    for (VarId v : entry_vars.ids)
        if (entry.prop_of(v) == ArgProp::Ground || entry.prop_of(v) == ArgProp::Any)
            sampled.push_back(v);
    std::vector<Term> pool = ground_pool(prog);

    // Mixed-radix enumeration over the sampled variables. Any-variables get
    // one extra digit meaning "leave unbound".
    std::vector<size_t> radix;
    for (VarId v : sampled)
        radix.push_back(pool.size() + (entry.prop_of(v) == ArgProp::Any ? 1 : 0));
    size_t total = 1;
    for (size_t r : radix)
        total = std::min<size_t>(total * r, 64);
    if (sampled.empty())
        total = 1;

    for (size_t combo = 0; combo < total; ++combo) {
        std::map<VarId, Term> theta;
        size_t rest = combo;
        for (size_t i = 0; i < sampled.size(); ++i) {
            size_t digit = rest % radix[i];
            rest /= radix[i];
            if (digit < pool.size())
                theta[sampled[i]] = pool[digit];
            // else: any-variable stays a free cell
        }
        Term instance = apply_map(entry.goal, theta);
        ++rep.instances;

        for (const ConcreteBinding& sol : sld_solutions(prog, instance, opts)) {
            ++rep.solutions;
            ConcreteBinding full;
            for (VarId v : entry_vars.ids) {
                auto it = theta.find(v);
                if (it != theta.end())
                    full[v] = it->second;
                else
                    full[v] = sol.at(v);
            }
            if (!dom.gamma_contains(success, full)) {
                ++rep.violations;
                if (rep.details.size() < 8) {
                    std::ostringstream os;
                    os << "instance " << term_to_string(instance) << " solution {";
                    bool first = true;
                    for (const auto& [v, t] : full) {
                        if (!first)
                            os << ", ";
                        first = false;
                        os << canonical_var_name(static_cast<int>(v)) << " = "
                           << term_to_string(t);
                    }
                    os << "} escapes "
                       << dom.render(success,
                                     [](VarId v) { return canonical_var_name(static_cast<int>(v)); });
                    rep.details.push_back(os.str());
                }
            }
        }
    }
    return rep;
}

} // namespace tabint
