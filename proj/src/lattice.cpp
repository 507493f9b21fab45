#include "tabint/lattice.hpp"

#include "tabint/domains/groundness.hpp"
#include "tabint/domains/sharefree.hpp"
#include "tabint/errors.hpp"

#include <algorithm>
#include <sstream>

namespace tabint {

bool VarSet::contains(VarId v) const {
    return std::find(ids.begin(), ids.end(), v) != ids.end();
}

int VarSet::index_of(VarId v) const {
    auto it = std::find(ids.begin(), ids.end(), v);
    return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

bool VarSet::subset_of(const VarSet& other) const {
    return std::all_of(ids.begin(), ids.end(), [&](VarId v) { return other.contains(v); });
}

bool VarSet::disjoint_from(const VarSet& other) const {
    return std::none_of(ids.begin(), ids.end(), [&](VarId v) { return other.contains(v); });
}

VarSet VarSet::concat(const VarSet& other) const {
    VarSet out = *this;
    out.ids.insert(out.ids.end(), other.ids.begin(), other.ids.end());
    return out;
}

std::string VarSet::str(const VarNamer& namer) const {
    std::string s = "{";
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i)
            s += ',';
        s += namer(ids[i]);
    }
    return s + "}";
}

std::string canonical_var_name(int position) {
    if (position >= 0 && position < 26)
        return std::string(1, static_cast<char>('A' + position));
    return "V" + std::to_string(position);
}

namespace {

[[noreturn]] void contract_fail(const std::string& op, const std::string& what) {
    throw ContractViolation(op + ": " + what);
}

void check_valid(const Subst& s, const char* op) {
    if (!s.valid())
        contract_fail(op, "invalid substitution argument");
}

// Are all arguments distinct variables?
bool distinct_var_args(const Term& t) {
    std::vector<VarId> seen;
    for (const Term& a : t.args()) {
        if (!a.is_var())
            return false;
        if (std::find(seen.begin(), seen.end(), a.var_id()) != seen.end())
            return false;
        seen.push_back(a.var_id());
    }
    return true;
}

// Goal and head unify by a pure variable-for-variable correspondence.
bool bijective_variant(const Term& goal, const Term& head) {
    if (goal.arity() != head.arity())
        return false;
    return distinct_var_args(goal) && distinct_var_args(head);
}

std::vector<VarId> positional_arg_vars(const Term& t) {
    std::vector<VarId> out;
    out.reserve(t.args().size());
    for (const Term& a : t.args())
        out.push_back(a.var_id());
    return out;
}

VarSet clause_var_set(const Clause& c) {
    std::vector<VarId> ids;
    c.head.collect_vars(ids);
    for (const Term& lit : c.body)
        lit.collect_vars(ids);
    return VarSet(std::move(ids));
}

} // namespace

void Domain::check_same_domain(const Subst& s, const char* op) const {
    check_valid(s, op);
    if (&s.domain() != this)
        contract_fail(op, "substitution belongs to domain '" + s.domain().name() +
                              "', expected '" + name() + "'");
}

Subst Domain::top(VarSet vs) const {
    RepPtr rep = v_top(vs);
    return wrap(std::move(vs), std::move(rep));
}

Subst Domain::lub(const Subst& a, const Subst& b) const {
    check_same_domain(a, "lub");
    check_same_domain(b, "lub");
    if (!(a.vars() == b.vars()))
        contract_fail("lub", "operands range over different variable sets");
    if (a.is_bottom())
        return b;
    if (b.is_bottom())
        return a;
    return wrap(a.vars(), v_lub(a.vars(), *a.rep_ptr(), *b.rep_ptr()));
}

bool Domain::leq(const Subst& a, const Subst& b) const {
    check_same_domain(a, "leq");
    check_same_domain(b, "leq");
    if (!(a.vars() == b.vars()))
        contract_fail("leq", "operands range over different variable sets");
    if (a.is_bottom())
        return true;
    if (b.is_bottom())
        return false;
    return v_leq(a.vars(), *a.rep_ptr(), *b.rep_ptr());
}

bool Domain::identical(const Subst& a, const Subst& b) const {
    check_same_domain(a, "identical");
    check_same_domain(b, "identical");
    if (!(a.vars() == b.vars()))
        contract_fail("identical", "operands range over different variable sets");
    if (a.is_bottom() || b.is_bottom())
        return a.is_bottom() == b.is_bottom();
    return v_identical(a.vars(), *a.rep_ptr(), *b.rep_ptr());
}

bool Domain::v_identical(const VarSet& vs, const SubstRep& a, const SubstRep& b) const {
    return v_leq(vs, a, b) && v_leq(vs, b, a);
}

Subst Domain::project_in(const VarSet& to, const Subst& s) const {
    check_same_domain(s, "project_in");
    if (!s.vars().subset_of(to))
        contract_fail("project_in", "target variable set does not cover the source");
    if (s.is_bottom())
        return bottom(to);
    return wrap(to, v_extend_scope(s.vars(), to, *s.rep_ptr()));
}

Subst Domain::project_out(const VarSet& to, const Subst& s) const {
    check_same_domain(s, "project_out");
    if (!to.subset_of(s.vars()))
        contract_fail("project_out", "target variable set is not contained in the source");
    if (s.is_bottom())
        return bottom(to);
    return wrap(to, v_project(s.vars(), to, *s.rep_ptr()));
}

Subst Domain::rename(const Subst& s, const VarSet& new_vars) const {
    check_same_domain(s, "rename");
    if (new_vars.size() != s.vars().size())
        contract_fail("rename", "renaming must be a positional bijection");
    if (s.is_bottom())
        return bottom(new_vars);
    return wrap(new_vars, v_rename(s.vars(), new_vars, *s.rep_ptr()));
}

Subst Domain::call_to_entry(const Term& goal, const Clause& clause, const Subst& proj) const {
    check_same_domain(proj, "call_to_entry");
    if (!goal.is_callable() || !clause.head.is_callable())
        contract_fail("call_to_entry", "goal and clause head must be callable");
    VarSet goal_vars = VarSet::of_term(goal);
    if (!(goal_vars == proj.vars()))
        contract_fail("call_to_entry", "proj must range exactly over the goal variables");
    VarSet cl_vars = clause_var_set(clause);
    if (!cl_vars.disjoint_from(goal_vars))
        contract_fail("call_to_entry", "goal and clause variables must be disjoint");
    VarSet head_vars = VarSet::of_term(clause.head);
    if (proj.is_bottom())
        return bottom(head_vars);

    if (bijective_variant(goal, clause.head) && goal_vars.ids == positional_arg_vars(goal)) {
        // Pure renaming: exact in every domain, and avoids the precision
        // loss of re-running abstract unification on correlated pairs.
        VarSet target(positional_arg_vars(clause.head));
        RepPtr renamed = v_rename(proj.vars(), target, *proj.rep_ptr());
        return wrap(std::move(target), std::move(renamed));
    }

    VarSet u = goal_vars.concat(cl_vars);
    RepPtr rep = v_extend_scope(proj.vars(), u, *proj.rep_ptr());
    rep = v_unify(u, std::move(rep), goal, clause.head);
    if (!rep)
        return bottom(head_vars);
    return wrap(head_vars, v_project(u, head_vars, *rep));
}

Subst Domain::exit_to_success(const Subst& proj, const Term& goal, const Clause& clause,
                              const Subst& exit) const {
    check_same_domain(proj, "exit_to_success");
    check_same_domain(exit, "exit_to_success");
    VarSet goal_vars = VarSet::of_term(goal);
    if (!(goal_vars == proj.vars()))
        contract_fail("exit_to_success", "proj must range exactly over the goal variables");
    VarSet head_vars = VarSet::of_term(clause.head);
    if (!(exit.vars() == head_vars))
        contract_fail("exit_to_success", "exit must range exactly over the clause head variables");
    if (proj.is_bottom() || exit.is_bottom())
        return bottom(goal_vars);

    if (bijective_variant(goal, clause.head) && goal_vars.ids == positional_arg_vars(goal)) {
        std::map<VarId, VarId> to_goal;
        for (int i = 0; i < goal.arity(); ++i)
            to_goal[clause.head.args()[i].var_id()] = goal.args()[i].var_id();
        std::vector<VarId> target;
        target.reserve(exit.vars().size());
        for (VarId v : exit.vars().ids)
            target.push_back(to_goal.at(v));
        RepPtr renamed = v_rename(exit.vars(), VarSet(target), *exit.rep_ptr());
        // Reorder onto the goal-variable order.
        return wrap(goal_vars, v_project(VarSet(target), goal_vars, *renamed));
    }

    VarSet u = goal_vars.concat(head_vars);
    RepPtr rep = v_conjoin(proj.vars(), *proj.rep_ptr(), exit.vars(), *exit.rep_ptr());
    rep = v_unify(u, std::move(rep), goal, clause.head);
    if (!rep)
        return bottom(goal_vars);
    return wrap(goal_vars, v_project(u, goal_vars, *rep));
}

Subst Domain::extend(const Subst& call, const Subst& prime) const {
    check_same_domain(call, "extend");
    check_same_domain(prime, "extend");
    if (!prime.vars().subset_of(call.vars()))
        contract_fail("extend", "prime variables must be contained in the call scope");
    if (call.is_bottom() || prime.is_bottom())
        return bottom(call.vars());
    return wrap(call.vars(), v_extend(call.vars(), *call.rep_ptr(), prime.vars(), *prime.rep_ptr()));
}

Subst Domain::unify(const Subst& s, const Term& a, const Term& b) const {
    check_same_domain(s, "unify");
    VarSet avs = VarSet::of_term(a), bvs = VarSet::of_term(b);
    if (!avs.subset_of(s.vars()) || !bvs.subset_of(s.vars()))
        contract_fail("unify", "equation variables must lie inside the substitution scope");
    if (s.is_bottom())
        return s;
    return wrap(s.vars(), v_unify(s.vars(), s.rep_ptr(), a, b));
}

Subst Domain::builtin_transfer(const Term& lit, const Subst& lam) const {
    check_same_domain(lam, "builtin_transfer");
    if (!lit.is_callable())
        contract_fail("builtin_transfer", "literal must be callable");
    auto b = builtin_of(pred_key_of(lit));
    if (!b)
        contract_fail("builtin_transfer", pred_key_of(lit).str() + " is not a builtin");
    if (!VarSet::of_term(lit).subset_of(lam.vars()))
        contract_fail("builtin_transfer", "literal variables must lie inside the scope");
    if (lam.is_bottom())
        return lam;

    switch (*b) {
    case Builtin::True:
        return lam;
    case Builtin::Fail:
        return bottom(lam.vars());
    case Builtin::Unify:
        return unify(lam, lit.args()[0], lit.args()[1]);
    case Builtin::Cmp:
        // Succeeds or fails without binding anything new.
        return lam;
    case Builtin::Is: {
        const Term& lhs = lit.args()[0];
        const Term& rhs = lit.args()[1];
        if (!lhs.is_var())
            return lam; // check-style use: no new bindings worth tracking
        if (v_all_ground(lam.vars(), *lam.rep_ptr(), rhs.vars())) {
            // The left side becomes some ground number; any ground term
            // induces the same abstract effect.
            return wrap(lam.vars(), v_unify(lam.vars(), lam.rep_ptr(), lhs, Term::integer(0)));
        }
        return wrap(lam.vars(), v_nonvar(lam.vars(), lam.rep_ptr(), lhs.var_id()));
    }
    }
    contract_fail("builtin_transfer", "unhandled builtin");
}

Subst Domain::initial_from_entry(const EntryDecl& e) const {
    VarSet vs = VarSet::of_term(e.goal);
    std::vector<ArgProp> props;
    props.reserve(vs.size());
    for (VarId v : vs.ids)
        props.push_back(e.prop_of(v));
    return wrap(vs, v_entry(vs, props));
}

bool Domain::gamma_contains(const Subst& s, const ConcreteBinding& binding) const {
    check_same_domain(s, "gamma_contains");
    if (s.is_bottom())
        return false;
    for (VarId v : s.vars().ids)
        if (!binding.count(v))
            contract_fail("gamma_contains", "binding does not cover the variable set");
    return v_gamma(s.vars(), *s.rep_ptr(), binding);
}

std::string Domain::render(const Subst& s, const VarNamer& namer) const {
    check_same_domain(s, "render");
    if (s.is_bottom())
        return "bottom";
    if (s.vars().empty())
        return "true";
    return v_render(s.vars(), *s.rep_ptr(), namer);
}

nlohmann::json Domain::to_json(const Subst& s, const VarNamer& namer) const {
    check_same_domain(s, "to_json");
    if (s.is_bottom())
        return nlohmann::json{{"bottom", true}};
    return v_json(s.vars(), *s.rep_ptr(), namer);
}

namespace {

void peel_into(const Term& a, const Term& b, std::vector<VarTermEq>& out) {
    if (a.is_var()) {
        out.push_back({a.var_id(), b});
        return;
    }
    if (b.is_var()) {
        out.push_back({b.var_id(), a});
        return;
    }
    if (a.is_compound() && b.is_compound() && a.name() == b.name() && a.arity() == b.arity()) {
        for (int i = 0; i < a.arity(); ++i)
            peel_into(a.args()[i], b.args()[i], out);
    }
    // Constant pair or clash: nothing to record.
}

} // namespace

std::vector<VarTermEq> peel_equations(const Term& a, const Term& b) {
    std::vector<VarTermEq> out;
    peel_into(a, b, out);
    return out;
}

NormalizedCall normalize_call(const Term& goal, const Subst& proj) {
    VarSet vs = VarSet::of_term(goal);
    if (!(vs == proj.vars()))
        throw ContractViolation("normalize_call: proj must range exactly over the goal variables");
    auto map_id = [&](VarId v) { return static_cast<VarId>(vs.index_of(v)); };
    auto map_name = [&](VarId v, const std::string&) { return canonical_var_name(vs.index_of(v)); };
    NormalizedCall out;
    out.goal = goal.rename_vars(map_id, map_name);
    std::vector<VarId> target(vs.size());
    for (size_t i = 0; i < vs.size(); ++i)
        target[i] = static_cast<VarId>(i);
    out.proj = proj.domain().rename(proj, VarSet(std::move(target)));
    return out;
}

Subst denormalize(const Subst& s, const VarSet& orig_vars) {
    return s.domain().rename(s, orig_vars);
}

const Domain& domain_by_kind(DomainKind k) {
    return k == DomainKind::Gr ? gr::domain() : shfr::domain();
}

const Domain* domain_by_name(const std::string& name) {
    if (name == "gr")
        return &gr::domain();
    if (name == "shfr")
        return &shfr::domain();
    return nullptr;
}

} // namespace tabint
