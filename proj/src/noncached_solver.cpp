#include "saginopt/noncached_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "saginopt/cached_solver.hpp"
#include "saginopt/linkmodel.hpp"
#include "saginopt/optcore.hpp"

namespace saginopt {

void NonCachedInstance::validate() const {
  if (packet_bits < 1.0)
    throw std::invalid_argument("noncached instance: packet_bits must be >= 1");
  if (max_isl < 1)
    throw std::invalid_argument("noncached instance: max_isl must be >= 1");
  if (omega_floor <= 0.0 || omega_floor >= 1.0)
    throw std::invalid_argument("noncached instance: omega_floor out of range");
  for (const auto& slot : band_slots)
    if (slot.c_const <= 0.0 || slot.bandwidth_hz <= 0.0)
      throw std::invalid_argument("noncached instance: bad band slot budget");
  for (const auto& req : case2) {
    if (req.file_packets < 1.0)
      throw std::invalid_argument("noncached instance: file size must be >= 1");
    for (const auto& relay : req.relays) {
      if (relay.isl_capacity_bps < 0.0)
        throw std::invalid_argument("noncached instance: negative ISL capacity");
      if (relay.band_slot < 0 ||
          relay.band_slot >= static_cast<int>(band_slots.size()))
        throw std::invalid_argument("noncached instance: band slot out of range");
    }
  }
  for (const auto& req : case1)
    if (req.file_packets < 1.0)
      throw std::invalid_argument("noncached instance: file size must be >= 1");
}

double case1_delay(const NonCachedInstance& inst, int case1_index) {
  const auto& req = inst.case1.at(case1_index);
  if (req.g2s_capacity_bps <= 0.0)
    throw std::invalid_argument("case1_delay: requester is not GS-visible");
  const double tran = tx_delay(1.0, req.file_packets, inst.packet_bits,
                               req.g2s_capacity_bps);
  return tran + req.g2s_prop_delay_s + req.phase2_delay_s;
}

double relay_delay(double rho, double omega, double file_bits,
                   double isl_capacity_bps, double c_const,
                   double bandwidth_hz, double prop_delay_s) {
  if (rho == 0.0) return prop_delay_s;
  const double feeder = g2s_rate(omega, c_const, bandwidth_hz);
  return tx_delay(rho, file_bits, 1.0, feeder) +
         tx_delay(rho, file_bits, 1.0, isl_capacity_bps) + prop_delay_s;
}

double path_capacity(const NonCachedInstance& inst, const RelayOption& relay,
                     const std::vector<double>& omega) {
  const BandSlot& slot = inst.band_slots[relay.band_slot];
  const double feeder =
      g2s_rate(omega[relay.band_slot], slot.c_const, slot.bandwidth_hz);
  if (feeder <= 0.0 || relay.isl_capacity_bps <= 0.0) return 0.0;
  return 1.0 / (1.0 / relay.isl_capacity_bps + 1.0 / feeder);
}

std::pair<std::vector<std::vector<double>>, std::vector<double>>
optimal_relay_ratios(const std::vector<std::vector<std::uint8_t>>& links,
                     const std::vector<double>& omega,
                     const NonCachedInstance& inst) {
  if (links.size() != inst.case2.size())
    throw std::invalid_argument("optimal_relay_ratios: shape mismatch");
  std::vector<std::vector<double>> ratios(links.size());
  std::vector<double> delays(links.size(), 0.0);
  for (std::size_t r = 0; r < links.size(); ++r) {
    const auto& req = inst.case2[r];
    ratios[r].assign(req.relays.size(), 0.0);
    double total = 0.0;
    for (std::size_t p = 0; p < req.relays.size(); ++p)
      if (links[r][p]) total += path_capacity(inst, req.relays[p], omega);
    if (total <= 0.0)
      throw SolverError("optimal_relay_ratios: requester has no active path");
    for (std::size_t p = 0; p < req.relays.size(); ++p)
      if (links[r][p])
        ratios[r][p] = path_capacity(inst, req.relays[p], omega) / total;
    delays[r] = req.file_packets * inst.packet_bits / total;
  }
  return {std::move(ratios), std::move(delays)};
}

namespace {

// d/dw [w log2(1 + c/w)]
double band_log_slope(double omega, double c_const) {
  return std::log2(1.0 + c_const / omega) -
         c_const / (std::log(2.0) * (omega + c_const));
}

double f2(double omega, double c_const) {
  return 1.0 / (omega * std::log2(1.0 + c_const / omega));
}

}  // namespace

double sca_product(double rho, double omega, double c_const) {
  return rho * f2(omega, c_const);
}

double sca_upper_bound(double rho, double omega, double rho0, double omega0,
                       double c_const) {
  const double f2w = f2(omega, c_const);
  const double f20 = f2(omega0, c_const);
  // slope of f2^2 at the expansion point
  const double d2 = -2.0 * f20 * f20 * f20 * band_log_slope(omega0, c_const);
  const double s = rho + f2w;
  return 0.5 * s * s - 0.5 * (rho0 * rho0 + 2.0 * rho0 * (rho - rho0)) -
         0.5 * (f20 * f20 + d2 * (omega - omega0));
}

double noncached_objective(const std::vector<std::vector<std::uint8_t>>& links,
                           const std::vector<double>& omega,
                           const NonCachedInstance& inst) {
  double total = 0.0;
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    const auto& req = inst.case2[r];
    double cap = 0.0;
    bool any = false;
    for (std::size_t p = 0; p < req.relays.size(); ++p)
      if (links[r][p]) {
        cap += path_capacity(inst, req.relays[p], omega);
        any = true;
      }
    if (!any) continue;  // unservable requesters are excluded
    if (cap <= 0.0) return std::numeric_limits<double>::infinity();
    total += req.file_packets * inst.packet_bits / cap;
  }
  return total;
}

std::vector<double> equal_split_omega(const NonCachedInstance& inst) {
  std::vector<int> per_gs_count;
  for (const auto& slot : inst.band_slots) {
    if (slot.gs_id >= static_cast<int>(per_gs_count.size()))
      per_gs_count.resize(slot.gs_id + 1, 0);
    ++per_gs_count[slot.gs_id];
  }
  std::vector<double> omega(inst.band_slots.size(), 1.0);
  for (std::size_t s = 0; s < inst.band_slots.size(); ++s) {
    const int n = per_gs_count[inst.band_slots[s].gs_id];
    omega[s] = std::clamp(1.0 / std::max(1, n), inst.omega_floor, 1.0);
  }
  return omega;
}

namespace {

struct StackedIndex {
  std::vector<int> rho_offset;  // per case-2 requester
  int rho_total = 0;
  int dim = 0;                  // rho_total + band slots

  explicit StackedIndex(const NonCachedInstance& inst) {
    rho_offset.resize(inst.case2.size());
    for (std::size_t r = 0; r < inst.case2.size(); ++r) {
      rho_offset[r] = rho_total;
      rho_total += static_cast<int>(inst.case2[r].relays.size());
    }
    dim = rho_total + static_cast<int>(inst.band_slots.size());
  }
};

}  // namespace

std::pair<std::vector<std::vector<double>>, std::vector<double>>
solve_bandwidth_subproblem(const std::vector<std::vector<std::uint8_t>>& links,
                           const std::vector<std::vector<double>>& rho0,
                           const std::vector<double>& omega0,
                           const NonCachedInstance& inst) {
  const StackedIndex index(inst);
  const int n_slots = static_cast<int>(inst.band_slots.size());

  ConvexProblem problem;
  problem.dim = index.dim;
  problem.lower.assign(index.dim, 0.0);
  problem.upper.assign(index.dim, 0.0);
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    bool any = false;
    LinearConstraint le, ge;
    for (std::size_t p = 0; p < inst.case2[r].relays.size(); ++p) {
      const int idx = index.rho_offset[r] + static_cast<int>(p);
      problem.upper[idx] = links[r][p] ? 1.0 : 0.0;
      if (links[r][p]) {
        any = true;
        le.terms.push_back({idx, 1.0});
        ge.terms.push_back({idx, -1.0});
      }
    }
    if (any) {  // ratios of an active requester sum to one
      le.bound = 1.0;
      ge.bound = -1.0;
      problem.constraints.push_back(std::move(le));
      problem.constraints.push_back(std::move(ge));
    }
  }
  for (int s = 0; s < n_slots; ++s) {
    problem.lower[index.rho_total + s] = inst.omega_floor;
    problem.upper[index.rho_total + s] = 1.0;
  }
  {
    // one band budget per ground station
    std::vector<LinearConstraint> per_gs;
    for (int s = 0; s < n_slots; ++s) {
      const int gs = inst.band_slots[s].gs_id;
      if (gs >= static_cast<int>(per_gs.size())) per_gs.resize(gs + 1);
      per_gs[gs].terms.push_back({index.rho_total + s, 1.0});
      per_gs[gs].bound = 1.0;
    }
    for (auto& c : per_gs)
      if (!c.terms.empty()) problem.constraints.push_back(std::move(c));
  }

  problem.objective = [&](std::span<const double> x, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    for (std::size_t r = 0; r < inst.case2.size(); ++r) {
      const auto& req = inst.case2[r];
      const double bits = req.file_packets * inst.packet_bits;
      for (std::size_t p = 0; p < req.relays.size(); ++p) {
        if (!links[r][p]) continue;
        const auto& relay = req.relays[p];
        const BandSlot& slot = inst.band_slots[relay.band_slot];
        const int ri = index.rho_offset[r] + static_cast<int>(p);
        const int wi = index.rho_total + relay.band_slot;
        const double rho = x[ri];
        const double w = x[wi];
        // ISL leg
        value += bits * rho / relay.isl_capacity_bps;
        grad[ri] += bits / relay.isl_capacity_bps;
        // feeder leg through the convex majorizer
        const double coeff = bits / slot.bandwidth_hz;
        const double f2w = f2(w, slot.c_const);
        const double f20 = f2(omega0[relay.band_slot], slot.c_const);
        const double d2 = -2.0 * f20 * f20 * f20 *
                          band_log_slope(omega0[relay.band_slot], slot.c_const);
        const double rr = rho0[r][p];
        const double s = rho + f2w;
        value += coeff * (0.5 * s * s -
                          0.5 * (rr * rr + 2.0 * rr * (rho - rr)) -
                          0.5 * (f20 * f20 + d2 * (w - omega0[relay.band_slot])));
        grad[ri] += coeff * (s - rr);
        const double f2p =
            -f2w * f2w * band_log_slope(w, slot.c_const);  // d f2 / d omega
        grad[wi] += coeff * (s * f2p - 0.5 * d2);
      }
    }
    return value;
  };

  std::vector<double> start(index.dim, 0.0);
  for (std::size_t r = 0; r < inst.case2.size(); ++r)
    for (std::size_t p = 0; p < inst.case2[r].relays.size(); ++p)
      start[index.rho_offset[r] + p] = links[r][p] ? rho0[r][p] : 0.0;
  for (int s = 0; s < n_slots; ++s) start[index.rho_total + s] = omega0[s];
  start = project_feasible(problem, start);
  MinimizeResult res = minimize(problem, start);

  std::vector<std::vector<double>> rho(inst.case2.size());
  std::vector<double> omega(n_slots);
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    rho[r].assign(inst.case2[r].relays.size(), 0.0);
    for (std::size_t p = 0; p < inst.case2[r].relays.size(); ++p)
      rho[r][p] = res.point[index.rho_offset[r] + p];
  }
  for (int s = 0; s < n_slots; ++s) omega[s] = res.point[index.rho_total + s];
  return {std::move(rho), std::move(omega)};
}

std::vector<double> optimize_bandwidth_equalized(
    const std::vector<std::vector<std::uint8_t>>& links,
    const std::vector<double>& omega0, const NonCachedInstance& inst) {
  const int n_slots = static_cast<int>(inst.band_slots.size());
  if (n_slots == 0) return {};
  ConvexProblem problem;
  problem.dim = n_slots;
  problem.lower.assign(n_slots, inst.omega_floor);
  problem.upper.assign(n_slots, 1.0);
  {
    std::vector<LinearConstraint> per_gs;
    for (int s = 0; s < n_slots; ++s) {
      const int gs = inst.band_slots[s].gs_id;
      if (gs >= static_cast<int>(per_gs.size())) per_gs.resize(gs + 1);
      per_gs[gs].terms.push_back({s, 1.0});
      per_gs[gs].bound = 1.0;
    }
    for (auto& c : per_gs)
      if (!c.terms.empty()) problem.constraints.push_back(std::move(c));
  }

  problem.objective = [&](std::span<const double> x, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    for (std::size_t r = 0; r < inst.case2.size(); ++r) {
      const auto& req = inst.case2[r];
      double cap = 0.0;
      bool any = false;
      for (std::size_t p = 0; p < req.relays.size(); ++p) {
        if (!links[r][p]) continue;
        any = true;
        const auto& relay = req.relays[p];
        const BandSlot& slot = inst.band_slots[relay.band_slot];
        const double g =
            g2s_rate(x[relay.band_slot], slot.c_const, slot.bandwidth_hz);
        if (g <= 0.0 || relay.isl_capacity_bps <= 0.0) continue;
        cap += 1.0 / (1.0 / relay.isl_capacity_bps + 1.0 / g);
      }
      if (!any) continue;
      if (cap <= 0.0) return std::numeric_limits<double>::infinity();
      const double bits = req.file_packets * inst.packet_bits;
      value += bits / cap;
      const double outer = -bits / (cap * cap);
      for (std::size_t p = 0; p < req.relays.size(); ++p) {
        if (!links[r][p]) continue;
        const auto& relay = req.relays[p];
        const BandSlot& slot = inst.band_slots[relay.band_slot];
        const double w = x[relay.band_slot];
        const double g = g2s_rate(w, slot.c_const, slot.bandwidth_hz);
        if (g <= 0.0 || relay.isl_capacity_bps <= 0.0) continue;
        const double ceff = 1.0 / (1.0 / relay.isl_capacity_bps + 1.0 / g);
        const double gprime =
            slot.bandwidth_hz * band_log_slope(w, slot.c_const);
        grad[relay.band_slot] += outer * (ceff / g) * (ceff / g) * gprime;
      }
    }
    return value;
  };

  std::vector<double> start = project_feasible(problem, omega0);
  MinimizeResult res = minimize(problem, start);
  return res.point;
}

namespace {

// Objective of the convex subproblem family evaluated exactly (no
// majorization): sum over active paths of rho*bits*(1/C_isl + 1/C_g2s(w)).
double exact_sum_objective(const std::vector<std::vector<std::uint8_t>>& links,
                           const std::vector<std::vector<double>>& rho,
                           const std::vector<double>& omega,
                           const NonCachedInstance& inst) {
  double value = 0.0;
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    const auto& req = inst.case2[r];
    const double bits = req.file_packets * inst.packet_bits;
    for (std::size_t p = 0; p < req.relays.size(); ++p) {
      if (!links[r][p]) continue;
      const auto& relay = req.relays[p];
      const BandSlot& slot = inst.band_slots[relay.band_slot];
      value += bits * rho[r][p] / relay.isl_capacity_bps;
      value += bits * rho[r][p] /
               g2s_rate(omega[relay.band_slot], slot.c_const, slot.bandwidth_hz);
    }
  }
  return value;
}

// Equalized ratios that tolerate unservable requesters.
std::vector<std::vector<double>> equalized_or_zero(
    const std::vector<std::vector<std::uint8_t>>& links,
    const std::vector<double>& omega, const NonCachedInstance& inst,
    std::vector<double>* delays_out, std::vector<std::uint8_t>* servable_out) {
  std::vector<std::vector<double>> ratios(inst.case2.size());
  if (delays_out) delays_out->assign(inst.case2.size(), 0.0);
  if (servable_out) servable_out->assign(inst.case2.size(), 1);
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    const auto& req = inst.case2[r];
    ratios[r].assign(req.relays.size(), 0.0);
    double total = 0.0;
    for (std::size_t p = 0; p < req.relays.size(); ++p)
      if (links[r][p]) total += path_capacity(inst, req.relays[p], omega);
    if (total <= 0.0) {
      if (servable_out) (*servable_out)[r] = 0;
      continue;
    }
    for (std::size_t p = 0; p < req.relays.size(); ++p)
      if (links[r][p])
        ratios[r][p] = path_capacity(inst, req.relays[p], omega) / total;
    if (delays_out)
      (*delays_out)[r] = req.file_packets * inst.packet_bits / total;
  }
  return ratios;
}

}  // namespace

// Relay association at fixed bandwidth: the problem has the cached shape
// with the harmonic path capacities as the candidate capacities.
std::vector<std::vector<std::uint8_t>> associate_relays(
    const NonCachedInstance& inst, const std::vector<double>& omega,
    std::vector<EpmIterate>* trace, bool* cap_hit) {
  CachedInstance sub;
  sub.packet_bits = inst.packet_bits;
  sub.max_isl = inst.max_isl;
  sub.degree_consumed = inst.degree_consumed;
  std::vector<int> mapping;
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    const auto& req = inst.case2[r];
    CachedRequester q;
    q.sat_id = req.sat_id;
    q.file_packets = req.file_packets;
    for (const auto& relay : req.relays)
      q.candidates.push_back(
          {relay.sat_id, path_capacity(inst, relay, omega), relay.prop_delay_s});
    bool reachable = false;
    for (const auto& c : q.candidates) reachable |= c.capacity_bps > 0.0;
    if (!reachable) continue;  // left unservable
    mapping.push_back(static_cast<int>(r));
    sub.requesters.push_back(std::move(q));
  }
  std::vector<std::vector<std::uint8_t>> links(inst.case2.size());
  for (std::size_t r = 0; r < inst.case2.size(); ++r)
    links[r].assign(inst.case2[r].relays.size(), 0);
  if (sub.requesters.empty()) return links;
  AssociationSolution sol = epm_associate(sub);
  for (std::size_t i = 0; i < mapping.size(); ++i)
    links[mapping[i]] = sol.links[i];
  if (trace) *trace = std::move(sol.trace);
  if (cap_hit) *cap_hit = sol.iteration_cap_hit;
  return links;
}

std::vector<double> bandwidth_step(
    const std::vector<std::vector<std::uint8_t>>& links,
    const std::vector<double>& omega, const NonCachedInstance& inst,
    const AoOptions& options) {
  // Successive convex refinements of the (rho, omega) subproblem.
  auto rho_it = equalized_or_zero(links, omega, inst, nullptr, nullptr);
  auto omega_it = omega;
  double sum_obj = exact_sum_objective(links, rho_it, omega_it, inst);
  for (int inner = 0; inner < options.max_inner_iterations; ++inner) {
    auto [rho_next, omega_next] =
        solve_bandwidth_subproblem(links, rho_it, omega_it, inst);
    const double next_sum =
        exact_sum_objective(links, rho_next, omega_next, inst);
    const double drop = sum_obj - next_sum;
    rho_it = std::move(rho_next);
    omega_it = std::move(omega_next);
    sum_obj = next_sum;
    if (drop < options.inner_tolerance * std::max(1.0, std::abs(sum_obj)))
      break;
  }
  // Exact convex polish with ratios pinned to their equalizing values.
  auto polished = optimize_bandwidth_equalized(links, omega_it, inst);
  if (!polished.empty() && noncached_objective(links, polished, inst) <
                               noncached_objective(links, omega_it, inst))
    return polished;
  return omega_it;
}

NonCachedSolution finalize_noncached(
    std::vector<std::vector<std::uint8_t>> links, std::vector<double> omega,
    const NonCachedInstance& inst) {
  NonCachedSolution solution;
  solution.objective_s = noncached_objective(links, omega, inst);
  solution.assoc.objective_s = solution.objective_s;
  solution.assoc.ratios =
      equalized_or_zero(links, omega, inst, &solution.assoc.phase1_delay_s,
                        &solution.assoc.servable);
  solution.assoc.gs_ratio.assign(inst.case2.size(), 0.0);
  solution.assoc.links = std::move(links);
  solution.omega = std::move(omega);
  return solution;
}

NonCachedSolution ao_solve(const NonCachedInstance& inst,
                           std::vector<double> omega0,
                           const AoOptions& options) {
  inst.validate();
  const int n_slots = static_cast<int>(inst.band_slots.size());
  std::vector<double> omega =
      omega0.empty() ? equal_split_omega(inst) : std::move(omega0);
  if (static_cast<int>(omega.size()) != n_slots)
    throw std::invalid_argument("ao_solve: omega0 size mismatch");

  std::vector<std::vector<std::uint8_t>> links(inst.case2.size());
  for (std::size_t r = 0; r < inst.case2.size(); ++r)
    links[r].assign(inst.case2[r].relays.size(), 0);
  double objective = std::numeric_limits<double>::infinity();

  std::vector<EpmIterate> kept_trace;
  bool kept_cap_hit = false;
  std::vector<AoIterate> outer_trace;

  for (int outer = 0; outer < options.max_outer_iterations; ++outer) {
    // Association step at the current bandwidth split; keep the better of the
    // previous and the fresh association.
    std::vector<EpmIterate> trace;
    bool cap_hit = false;
    auto new_links = associate_relays(inst, omega, &trace, &cap_hit);
    const double new_objective = noncached_objective(new_links, omega, inst);
    if (new_objective <= objective) {
      links = std::move(new_links);
      objective = new_objective;
      kept_trace = std::move(trace);
      kept_cap_hit |= cap_hit;
    }

    // Bandwidth step at the fixed association.
    auto omega_next = bandwidth_step(links, omega, inst, options);
    const double candidate = noncached_objective(links, omega_next, inst);
    if (candidate <= objective) {
      omega = std::move(omega_next);
      objective = candidate;
    }

    outer_trace.push_back({outer, objective});
    if (outer > 0) {
      const double prev = outer_trace[outer - 1].objective_s;
      if (prev - objective < options.tolerance) break;
    }
  }

  NonCachedSolution solution =
      finalize_noncached(std::move(links), std::move(omega), inst);
  solution.assoc.trace = std::move(kept_trace);
  solution.assoc.iteration_cap_hit = kept_cap_hit;
  solution.outer_trace = std::move(outer_trace);
  return solution;
}

}  // namespace saginopt
