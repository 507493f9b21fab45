#pragma once

#include "tabint/lattice.hpp"

namespace tabint::gr {

// Two-point groundness lattice per variable: g (definitely ground) below
// any (unknown), compared and joined pointwise.
const Domain& domain();

// Abstract unification of a = b under lam: structural peeling into
// variable/term constraints followed by a ground-propagation fixpoint.
// Cannot detect failure (never returns BOTTOM on non-BOTTOM input).
Subst abstract_unify(const Term& a, const Term& b, const Subst& lam);

} // namespace tabint::gr
