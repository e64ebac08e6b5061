#pragma once

#include <utility>
#include <vector>

#include "saginopt/instances.hpp"

namespace saginopt {

struct AoOptions {
  double tolerance = 1e-5;      // xi, on the outer objective decrease
  int max_outer_iterations = 50;
  int max_inner_iterations = 12;  // convex re-expansions per bandwidth step
  double inner_tolerance = 1e-6;  // relative, on the subproblem objective
};

// Constant phase-1 delay of a directly GS-visible requester: G2S transmission
// plus propagation plus the phase-2 leg. Throws when the requester has no
// G2S capacity.
double case1_delay(const NonCachedInstance& inst, int case1_index);

// Two-hop delay of one relay path at the given download ratio and bandwidth
// share: rho*bits*(1/C_g2s(omega) + 1/C_isl) + propagation.
double relay_delay(double rho, double omega, double file_bits,
                   double isl_capacity_bps, double c_const,
                   double bandwidth_hz, double prop_delay_s);

// Effective capacity of a relay path: the harmonic combination of the ISL
// and the ground-station feeder at bandwidth share omega.
double path_capacity(const NonCachedInstance& inst, const RelayOption& relay,
                     const std::vector<double>& omega);

// Harmonic download split across the active relay paths; equalizes the
// per-path two-hop transmission delays. Throws when a requester with active
// links has zero aggregate path capacity.
std::pair<std::vector<std::vector<double>>, std::vector<double>>
optimal_relay_ratios(const std::vector<std::vector<std::uint8_t>>& links,
                     const std::vector<double>& omega,
                     const NonCachedInstance& inst);

// The non-convex per-path objective rho / (omega log2(1 + c/omega)) and its
// convex majorizer around an expansion point. The majorizer is tangent at
// the expansion point and dominates everywhere on the feasible box.
double sca_product(double rho, double omega, double c_const);
double sca_upper_bound(double rho, double omega, double rho0, double omega0,
                       double c_const);

// One convex ratio/bandwidth subproblem at a fixed association, expanded
// around (rho0, omega0); returns the updated point.
std::pair<std::vector<std::vector<double>>, std::vector<double>>
solve_bandwidth_subproblem(const std::vector<std::vector<std::uint8_t>>& links,
                           const std::vector<std::vector<double>>& rho0,
                           const std::vector<double>& omega0,
                           const NonCachedInstance& inst);

// Equal split of each ground station band across its contending relays.
std::vector<double> equal_split_omega(const NonCachedInstance& inst);

// Exact bandwidth optimization at fixed association with the download ratios
// pinned to their equalizing values: the resulting objective
// sum_j bits_j / sum_p Ceff_p(omega) is convex in omega.
std::vector<double> optimize_bandwidth_equalized(
    const std::vector<std::vector<std::uint8_t>>& links,
    const std::vector<double>& omega0, const NonCachedInstance& inst);

// Relay association at a fixed bandwidth split (a cached-shape problem over
// the harmonic path capacities, solved by the exact-penalty method).
std::vector<std::vector<std::uint8_t>> associate_relays(
    const NonCachedInstance& inst, const std::vector<double>& omega,
    std::vector<EpmIterate>* trace = nullptr, bool* cap_hit = nullptr);

// Bandwidth update at fixed association: successive convex refinements
// followed by the exact equalized polish; returns the improved split.
std::vector<double> bandwidth_step(
    const std::vector<std::vector<std::uint8_t>>& links,
    const std::vector<double>& omega, const NonCachedInstance& inst,
    const AoOptions& options = {});

// Assembles ratios, delays, servable flags and the objective for a final
// (association, bandwidth) state.
NonCachedSolution finalize_noncached(
    std::vector<std::vector<std::uint8_t>> links, std::vector<double> omega,
    const NonCachedInstance& inst);

// Alternating optimization: relay association by the exact-penalty solver at
// fixed bandwidth, then successive convex bandwidth/ratio updates at fixed
// association, until the objective decrease drops below tolerance.
NonCachedSolution ao_solve(const NonCachedInstance& inst,
                           std::vector<double> omega0 = {},
                           const AoOptions& options = {});

// Sum of equalized per-requester two-hop transmission delays at a state.
double noncached_objective(const std::vector<std::vector<std::uint8_t>>& links,
                           const std::vector<double>& omega,
                           const NonCachedInstance& inst);

}  // namespace saginopt
