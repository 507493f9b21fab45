#pragma once

#include "tabint/lattice.hpp"

namespace tabint::shfr {

// Set-sharing with freeness. A sharing group is the set of substitution
// variables whose bindings may contain one common runtime variable;
// groundness of v is encoded as v appearing in no group. The freeness mark
// asserts that v is definitely still an unbound variable (which implies v
// appears in some group).
const Domain& domain();

using Group = std::vector<VarId>;   // sorted ascending
using Sharing = std::vector<Group>; // sorted, duplicate-free

// Maximum number of groups accepted as star_union input.
inline constexpr size_t kClosureLimit = 16;

// All unions of non-empty subsets of `groups`. Inputs wider than `limit`
// raise ResourceLimitError.
Sharing star_union(const Sharing& groups, size_t limit = kClosureLimit);

// One abstract-unification step for the equation x = t under lam.
Subst amgu(VarId x, const Term& t, const Subst& lam);

} // namespace tabint::shfr
