#pragma once

#include "saginopt/instances.hpp"
#include "saginopt/rng.hpp"

namespace saginopt {

// Globally optimal cached association by enumerating every feasible
// per-requester candidate subset. Guarded: throws when the instance carries
// more than `max_binary_vars` link variables.
AssociationSolution exhaustive_cached(const CachedInstance& inst,
                                      int max_binary_vars = 24);

// Requesters in descending file-size order each take their highest-capacity
// candidates until the link budgets run out.
AssociationSolution greedy_cached(const CachedInstance& inst);

// Feasible association drawn uniformly per requester, budget-aware.
AssociationSolution random_cached(const CachedInstance& inst, RngStream& rng);

// Non-cached baseline: fixed equal bandwidth split per ground station,
// association by the exact-penalty solver, ratios equalized.
NonCachedSolution equal_bandwidth(const NonCachedInstance& inst);

// Non-cached baseline: relaxed association in [0,1] solved as a convex
// program, rounded at 1/2 (ties down), repaired, then bandwidth-optimized.
NonCachedSolution rounding_assoc(const NonCachedInstance& inst);

}  // namespace saginopt
