#pragma once

#include "tabint/term.hpp"

#include <unordered_map>

namespace tabint {

// Concrete binding store for resolution. Bindings are never undone; callers
// copy the store per choice point (desk-scale inputs keep this cheap).
class Bindings {
public:
    // Dereferences a top-level variable chain; does not descend into args.
    Term walk(const Term& t) const;
    // Full substitution application. Only safe when the store is acyclic
    // (guaranteed when all bindings were made with occurs check on).
    Term resolve(const Term& t) const;

    bool bound(VarId v) const { return map_.count(v) != 0; }
    void bind(VarId v, Term t) { map_.emplace(v, std::move(t)); }
    size_t size() const { return map_.size(); }

private:
    std::unordered_map<VarId, Term> map_;
};

// Unifies a and b under the store, extending it in place. On failure the
// store may hold partial bindings; copy it beforehand if that matters.
// occurs_check selects sound tree unification; without it the check is
// rational-tree style (sufficient as a clause-applicability filter).
bool unify(const Term& a, const Term& b, Bindings& bindings, bool occurs_check);

// Clause-filter convenience: can a and b unify at all (fresh store,
// no occurs check)? Variable spaces of a and b should be disjoint.
bool unifiable(const Term& a, const Term& b);

} // namespace tabint
