#pragma once

#include <vector>

#include "saginopt/instances.hpp"

namespace saginopt {

/// Exact-penalty solver for the cached-file association problem. Binary
/// association variables are relaxed to pi in [-1,1]^K coupled to an
/// auxiliary v with ||v||^2 <= K; the inner-product equality <pi,v> = K is
/// enforced by a geometrically growing penalty, which is exact for binary
/// feasibility (every member of the coupling set is a sign matrix).
struct EpmOptions {
  double epsilon0 = 1e-4;   // initial penalty weight
  double growth = 5.0;      // Delta
  double tolerance = 1e-5;  // xi, on the residual K - <pi, v>
  int max_outer_iterations = 80;
};

// Capacity-proportional download ratios for a fixed association; returns the
// per-requester equalized transmission delay alongside. Throws SolverError
// when some requester is left with zero aggregate capacity.
std::pair<std::vector<std::vector<double>>, std::vector<double>>
optimal_ratios(const std::vector<std::vector<std::uint8_t>>& links,
               const CachedInstance& inst, std::vector<double>* gs_ratio = nullptr);

// Penalized convex pi-subproblem at fixed v and epsilon; pi is the stacked
// link-variable vector in the instance's (requester, candidate) order.
std::vector<double> solve_pi_subproblem(const std::vector<double>& v,
                                        double epsilon,
                                        const CachedInstance& inst,
                                        const std::vector<double>* warm_start = nullptr);

// Closed-form v-step: the maximizer of <pi, v> over ||v||_2 <= scale.
std::vector<double> update_v(const std::vector<double>& pi, double scale);

// Membership test for the binary-coupling set used by the penalty
// reformulation: <u,v> = m*n, -1 <= u <= 1, ||v||^2 <= m*n.
bool binary_coupling_member(const std::vector<double>& u, const std::vector<double>& v,
                    int m, int n, double tol = 1e-9);

// Full exact-penalty association loop.
AssociationSolution epm_associate(const CachedInstance& inst,
                                  const EpmOptions& options = {});

// Continuous objective F at a relaxed point (stacked like the pi vector).
double cached_objective_relaxed(const std::vector<double>& pi,
                                const CachedInstance& inst);

// Aggregate-capacity objective of a binary association.
double cached_objective(const std::vector<std::vector<std::uint8_t>>& links,
                        const CachedInstance& inst);

// Rounds a relaxed pi by sign (ties at zero stay off) and repairs the
// per-satellite degree budget by dropping the lowest-capacity links; keeps
// every requester servable when the budget allows. With fill_budget the
// leftover budget is then spent on the strongest inactive links, which never
// hurts the aggregate-capacity objective.
std::vector<std::vector<std::uint8_t>> round_and_repair(
    const std::vector<double>& pi, const CachedInstance& inst,
    bool fill_budget = false);

// Fills ratios, per-requester delays, servable flags and the objective for
// the association already stored in `solution.links`.
void attach_ratios(const CachedInstance& inst, AssociationSolution& solution);

}  // namespace saginopt
