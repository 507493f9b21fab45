#pragma once

#include "tabint/program.hpp"
#include "tabint/term.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tabint {

// Ordered set of variable ids. The order is part of the value: substitution
// representations index their payload by position in this order.
struct VarSet {
    std::vector<VarId> ids;

    VarSet() = default;
    explicit VarSet(std::vector<VarId> v) : ids(std::move(v)) {}
    static VarSet of_term(const Term& t) { return VarSet(t.vars()); }

    size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
    bool contains(VarId v) const;
    // Position of v, -1 if absent.
    int index_of(VarId v) const;
    bool subset_of(const VarSet& other) const;
    bool disjoint_from(const VarSet& other) const;
    // Precondition: disjoint.
    VarSet concat(const VarSet& other) const;

    bool operator==(const VarSet&) const = default;
    std::string str(const std::function<std::string(VarId)>& namer) const;
};

using VarNamer = std::function<std::string(VarId)>;

// Canonical positional variable names: A, B, ..., Z, V26, V27, ...
std::string canonical_var_name(int position);

// Domain-private payload of a non-bottom substitution.
class SubstRep {
public:
    virtual ~SubstRep() = default;
};

class Domain;

// Abstract substitution: an element of one domain's lattice over a fixed
// variable set. Immutable; cheap to copy.
class Subst {
public:
    Subst() = default; // invalid until assigned

    static Subst make_bottom(const Domain& d, VarSet vs) {
        Subst s;
        s.domain_ = &d;
        s.vars_ = std::move(vs);
        s.bottom_ = true;
        return s;
    }
    Subst(const Domain& d, VarSet vs, std::shared_ptr<const SubstRep> rep)
        : domain_(&d), vars_(std::move(vs)), rep_(std::move(rep)) {}

    bool valid() const { return domain_ != nullptr; }
    const Domain& domain() const { return *domain_; }
    const VarSet& vars() const { return vars_; }
    bool is_bottom() const { return bottom_; }
    const std::shared_ptr<const SubstRep>& rep_ptr() const { return rep_; }
    template <class R>
    const R& rep() const { return static_cast<const R&>(*rep_); }

private:
    const Domain* domain_ = nullptr;
    VarSet vars_;
    bool bottom_ = false;
    std::shared_ptr<const SubstRep> rep_;
};

// Concrete valuation of a variable set: every variable mapped to a term.
// Terms may contain (runtime) variables; those stand for unbound cells.
using ConcreteBinding = std::map<VarId, Term>;

// One abstract domain. Public operations validate their preconditions
// (matching domains, variable-set shape) and handle BOTTOM uniformly;
// the v_* hooks implement the domain-specific part on non-bottom payloads.
// Precondition violations raise ContractViolation.
class Domain {
public:
    virtual ~Domain() = default;
    virtual std::string name() const = 0;

    Subst bottom(VarSet vs) const { return Subst::make_bottom(*this, std::move(vs)); }
    // Least informative element: no instantiation information at all.
    Subst top(VarSet vs) const;

    // Least upper bound / partial order / semantic equivalence.
    // Both arguments must range over the same VarSet.
    Subst lub(const Subst& a, const Subst& b) const;
    bool leq(const Subst& a, const Subst& b) const;
    bool identical(const Subst& a, const Subst& b) const;

    // Scope extension: vars(s) is a subset of `to`; new variables enter as
    // fresh, unconstrained, unaliased ones.
    Subst project_in(const VarSet& to, const Subst& s) const;
    // Restriction (also reordering): `to` is a subset of vars(s).
    Subst project_out(const VarSet& to, const Subst& s) const;
    // Positional renaming: new_vars[i] replaces vars(s).ids[i].
    Subst rename(const Subst& s, const VarSet& new_vars) const;

    // Entry substitution over the head variables of `clause` for a call to
    // `goal` under projected call substitution `proj` (over vars(goal)).
    // Goal and clause variable ids must be disjoint.
    Subst call_to_entry(const Term& goal, const Clause& clause, const Subst& proj) const;
    // Success substitution over vars(goal) from the clause exit substitution
    // (over the head variables of `clause`, same renamed instance).
    Subst exit_to_success(const Subst& proj, const Term& goal, const Clause& clause,
                          const Subst& exit) const;
    // Propagates the primed success (over goal vars, a subset of vars(call))
    // back into the full scope of `call`.
    Subst extend(const Subst& call, const Subst& prime) const;

    // Abstract conjunction of the equation a = b under s.
    // vars(a), vars(b) must lie inside vars(s).
    Subst unify(const Subst& s, const Term& a, const Term& b) const;

    // Transfer function of an evaluable builtin literal.
    Subst builtin_transfer(const Term& lit, const Subst& lam) const;

    // Initial substitution over vars(e.goal) from the declared properties.
    Subst initial_from_entry(const EntryDecl& e) const;

    // Concretization membership for the oracle: does the concrete valuation
    // lie in gamma(s)? Binding must cover vars(s) exactly.
    bool gamma_contains(const Subst& s, const ConcreteBinding& binding) const;

    std::string render(const Subst& s, const VarNamer& namer) const;
    nlohmann::json to_json(const Subst& s, const VarNamer& namer) const;

protected:
    using RepPtr = std::shared_ptr<const SubstRep>;

    virtual RepPtr v_top(const VarSet& vs) const = 0;
    virtual RepPtr v_entry(const VarSet& vs, const std::vector<ArgProp>& props) const = 0;
    virtual RepPtr v_lub(const VarSet& vs, const SubstRep& a, const SubstRep& b) const = 0;
    virtual bool v_leq(const VarSet& vs, const SubstRep& a, const SubstRep& b) const = 0;
    // Default: mutual v_leq.
    virtual bool v_identical(const VarSet& vs, const SubstRep& a, const SubstRep& b) const;
    // to is a subset (possibly reordered) of from.
    virtual RepPtr v_project(const VarSet& from, const VarSet& to, const SubstRep& s) const = 0;
    // from is a subset of to; added variables are fresh and unaliased.
    virtual RepPtr v_extend_scope(const VarSet& from, const VarSet& to, const SubstRep& s) const = 0;
    virtual RepPtr v_rename(const VarSet& from, const VarSet& to, const SubstRep& s) const = 0;
    // Abstract unification; nullptr encodes BOTTOM (detected inconsistency).
    virtual RepPtr v_unify(const VarSet& vs, RepPtr s, const Term& a, const Term& b) const = 0;
    // Conjunction of payloads over disjoint scopes, result over av ++ bv.
    virtual RepPtr v_conjoin(const VarSet& av, const SubstRep& a, const VarSet& bv,
                             const SubstRep& b) const = 0;
    virtual RepPtr v_extend(const VarSet& call_vs, const SubstRep& call, const VarSet& prime_vs,
                            const SubstRep& prime) const = 0;
    // Are all of `vars` definitely ground?
    virtual bool v_all_ground(const VarSet& vs, const SubstRep& s,
                              const std::vector<VarId>& vars) const = 0;
    // v is bound to a non-variable term without becoming ground or aliased.
    // Domains without freeness information return s unchanged.
    virtual RepPtr v_nonvar(const VarSet& vs, RepPtr s, VarId v) const { (void)vs, (void)v; return s; }
    virtual bool v_gamma(const VarSet& vs, const SubstRep& s, const ConcreteBinding& b) const = 0;
    virtual std::string v_render(const VarSet& vs, const SubstRep& s, const VarNamer& n) const = 0;
    virtual nlohmann::json v_json(const VarSet& vs, const SubstRep& s, const VarNamer& n) const = 0;

private:
    void check_same_domain(const Subst& s, const char* op) const;
    Subst wrap(VarSet vs, RepPtr rep) const {
        return rep ? Subst(*this, std::move(vs), std::move(rep))
                   : Subst::make_bottom(*this, std::move(vs));
    }
};

// Structural peeling of the equation a = b into variable-rooted equations.
// Compound pairs with matching functor/arity decompose argument-wise;
// mismatched non-variable pairs are skipped (concrete failure is handled by
// clause filtering, domains over-approximate).
struct VarTermEq {
    VarId var;
    Term term;
};
std::vector<VarTermEq> peel_equations(const Term& a, const Term& b);

// Call-pattern normalization: variables of `goal` become 0..k-1 in
// first-occurrence order with canonical names; proj is renamed to match.
struct NormalizedCall {
    Term goal;
    Subst proj;
};
NormalizedCall normalize_call(const Term& goal, const Subst& proj);
// Renames a substitution over 0..k-1 back onto the given variables.
Subst denormalize(const Subst& s, const VarSet& orig_vars);

enum class DomainKind { Gr, ShFr };

const Domain& domain_by_kind(DomainKind k);
// Accepts "gr" and "shfr".
const Domain* domain_by_name(const std::string& name);

} // namespace tabint
