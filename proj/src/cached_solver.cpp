#include "saginopt/cached_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "saginopt/optcore.hpp"

namespace saginopt {

void CachedInstance::validate() const {
  if (packet_bits < 1.0)
    throw std::invalid_argument("cached instance: packet_bits must be >= 1");
  if (max_isl < 1)
    throw std::invalid_argument("cached instance: max_isl must be >= 1");
  for (const auto& r : requesters) {
    if (r.file_packets < 1.0)
      throw std::invalid_argument("cached instance: file size must be >= 1 packet");
    if (r.g2s_capacity_bps < 0.0)
      throw std::invalid_argument("cached instance: negative G2S capacity");
    double total = r.g2s_capacity_bps;
    for (const auto& c : r.candidates) {
      if (c.capacity_bps < 0.0)
        throw std::invalid_argument("cached instance: negative ISL capacity");
      if (c.sat_id == r.sat_id)
        throw std::invalid_argument(
            "cached instance: a requester cannot be its own candidate");
      total += c.capacity_bps;
    }
    if (total <= 0.0)
      throw std::invalid_argument(
          "cached instance: requester has no reachable capacity");
  }
}

namespace {

struct LinkIndex {
  std::vector<int> offset;             // per requester, into the stacked vector
  int total = 0;
  // Per satellite id: stacked link indices incident to it and its budget.
  std::map<int, std::vector<int>> incident;
  std::map<int, int> budget;

  explicit LinkIndex(const CachedInstance& inst) {
    offset.resize(inst.requesters.size());
    for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
      offset[r] = total;
      total += static_cast<int>(inst.requesters[r].candidates.size());
    }
    auto budget_of = [&](int sat) {
      int used = 0;
      if (auto it = inst.degree_consumed.find(sat);
          it != inst.degree_consumed.end())
        used = it->second;
      return std::max(0, inst.max_isl - used);
    };
    for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
      const auto& req = inst.requesters[r];
      budget.try_emplace(req.sat_id, budget_of(req.sat_id));
      for (std::size_t c = 0; c < req.candidates.size(); ++c) {
        const int link = offset[r] + static_cast<int>(c);
        incident[req.sat_id].push_back(link);
        const int peer = req.candidates[c].sat_id;
        budget.try_emplace(peer, budget_of(peer));
        incident[peer].push_back(link);
      }
    }
  }
};

double requester_capacity(const CachedRequester& req,
                          const std::vector<std::uint8_t>& links) {
  double total = req.g2s_capacity_bps;
  for (std::size_t c = 0; c < req.candidates.size(); ++c)
    if (links[c]) total += req.candidates[c].capacity_bps;
  return total;
}

}  // namespace

std::pair<std::vector<std::vector<double>>, std::vector<double>>
optimal_ratios(const std::vector<std::vector<std::uint8_t>>& links,
               const CachedInstance& inst, std::vector<double>* gs_ratio) {
  if (links.size() != inst.requesters.size())
    throw std::invalid_argument("optimal_ratios: association shape mismatch");
  std::vector<std::vector<double>> ratios(links.size());
  std::vector<double> delays(links.size(), 0.0);
  if (gs_ratio) gs_ratio->assign(links.size(), 0.0);
  for (std::size_t r = 0; r < links.size(); ++r) {
    const auto& req = inst.requesters[r];
    const double total = requester_capacity(req, links[r]);
    if (total <= 0.0)
      throw SolverError("optimal_ratios: requester has zero active capacity");
    ratios[r].resize(req.candidates.size(), 0.0);
    // Capacity-proportional split equalizes every active link's delay.
    for (std::size_t c = 0; c < req.candidates.size(); ++c)
      if (links[r][c]) ratios[r][c] = req.candidates[c].capacity_bps / total;
    if (gs_ratio) (*gs_ratio)[r] = req.g2s_capacity_bps / total;
    delays[r] = req.file_packets * inst.packet_bits / total;
  }
  return {std::move(ratios), std::move(delays)};
}

double cached_objective(const std::vector<std::vector<std::uint8_t>>& links,
                        const CachedInstance& inst) {
  double total = 0.0;
  for (std::size_t r = 0; r < links.size(); ++r) {
    const auto& req = inst.requesters[r];
    const double cap = requester_capacity(req, links[r]);
    if (cap <= 0.0) return std::numeric_limits<double>::infinity();
    total += req.file_packets * inst.packet_bits / cap;
  }
  return total;
}

double cached_objective_relaxed(const std::vector<double>& pi,
                                const CachedInstance& inst) {
  double total = 0.0;
  int idx = 0;
  for (const auto& req : inst.requesters) {
    double cap = req.g2s_capacity_bps;
    double reachable = req.g2s_capacity_bps;
    for (const auto& c : req.candidates) {
      cap += 0.5 * (pi[idx++] + 1.0) * c.capacity_bps;
      reachable += c.capacity_bps;
    }
    cap = std::max(cap, 1e-6 * (reachable + 1.0));
    total += req.file_packets * inst.packet_bits / cap;
  }
  return total;
}

std::vector<double> solve_pi_subproblem(const std::vector<double>& v,
                                        double epsilon,
                                        const CachedInstance& inst,
                                        const std::vector<double>* warm_start) {
  const LinkIndex index(inst);
  const int dim = index.total;
  if (dim == 0) return {};
  if (static_cast<int>(v.size()) != dim)
    throw std::invalid_argument("solve_pi_subproblem: v size mismatch");

  ConvexProblem problem;
  problem.dim = dim;
  problem.lower.assign(dim, -1.0);
  problem.upper.assign(dim, 1.0);
  for (const auto& [sat, links] : index.incident) {
    // sum (pi+1)/2 over incident links <= budget
    LinearConstraint c;
    for (int l : links) c.terms.push_back({l, 1.0});
    c.bound = 2.0 * index.budget.at(sat) - static_cast<double>(links.size());
    problem.constraints.push_back(std::move(c));
  }

  problem.objective = [&inst, &v, epsilon, dim](std::span<const double> x,
                                                std::span<double> grad) {
    double value = epsilon * static_cast<double>(dim);
    for (int i = 0; i < dim; ++i) {
      value -= epsilon * x[i] * v[i];
      grad[i] = -epsilon * v[i];
    }
    int idx = 0;
    for (const auto& req : inst.requesters) {
      double cap = req.g2s_capacity_bps;
      double reachable = req.g2s_capacity_bps;
      const int first = idx;
      for (const auto& c : req.candidates) {
        cap += 0.5 * (x[idx++] + 1.0) * c.capacity_bps;
        reachable += c.capacity_bps;
      }
      // Keep the objective finite when constraints pin a requester to zero
      // capacity; the huge-but-finite delay still points the right way.
      cap = std::max(cap, 1e-6 * (reachable + 1.0));
      const double bits = req.file_packets * inst.packet_bits;
      value += bits / cap;
      const double scale = -bits / (cap * cap);
      for (std::size_t c = 0; c < req.candidates.size(); ++c)
        grad[first + static_cast<int>(c)] +=
            scale * 0.5 * req.candidates[c].capacity_bps;
    }
    return value;
  };

  std::vector<double> start(dim, 0.0);
  if (warm_start && static_cast<int>(warm_start->size()) == dim)
    start = *warm_start;
  start = project_feasible(problem, start);
  MinimizeResult res = minimize(problem, start);
  return res.point;
}

std::vector<double> update_v(const std::vector<double>& pi, double scale) {
  double norm = 0.0;
  for (double p : pi) norm += p * p;
  norm = std::sqrt(norm);
  std::vector<double> v(pi.size(), 0.0);
  if (norm <= 0.0) return v;
  for (std::size_t i = 0; i < pi.size(); ++i) v[i] = scale * pi[i] / norm;
  return v;
}

bool binary_coupling_member(const std::vector<double>& u, const std::vector<double>& v,
                    int m, int n, double tol) {
  const std::size_t size = static_cast<std::size_t>(m) * n;
  if (u.size() != size || v.size() != size)
    throw std::invalid_argument("binary_coupling_member: size mismatch");
  const double target = static_cast<double>(m) * n;
  double inner = 0.0;
  double vnorm2 = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    if (u[i] < -1.0 - tol || u[i] > 1.0 + tol) return false;
    inner += u[i] * v[i];
    vnorm2 += v[i] * v[i];
  }
  return std::abs(inner - target) <= tol && vnorm2 <= target + tol;
}

std::vector<std::vector<std::uint8_t>> round_and_repair(
    const std::vector<double>& pi, const CachedInstance& inst,
    bool fill_budget) {
  const LinkIndex index(inst);
  const std::size_t n_req = inst.requesters.size();
  std::vector<std::vector<std::uint8_t>> links(n_req);
  struct LinkRef {
    int requester;
    int candidate;
    int stacked;
  };
  std::vector<LinkRef> refs(index.total);
  for (std::size_t r = 0; r < n_req; ++r) {
    const auto& req = inst.requesters[r];
    links[r].assign(req.candidates.size(), 0);
    for (std::size_t c = 0; c < req.candidates.size(); ++c) {
      const int stacked = index.offset[r] + static_cast<int>(c);
      refs[stacked] = {static_cast<int>(r), static_cast<int>(c), stacked};
      links[r][c] = pi[stacked] > 0.0 ? 1 : 0;  // ties at zero stay off
    }
  }

  auto capacity_of = [&](const LinkRef& ref) {
    return inst.requesters[ref.requester].candidates[ref.candidate].capacity_bps;
  };
  auto active_count = [&](std::size_t r) {
    int n = 0;
    for (auto b : links[r]) n += b;
    return n;
  };
  auto orphan_if_dropped = [&](const LinkRef& ref) {
    return inst.requesters[ref.requester].g2s_capacity_bps <= 0.0 &&
           active_count(ref.requester) <= 1;
  };
  auto load_of = [&](int sat) {
    int load = 0;
    for (int l : index.incident.at(sat))
      load += links[refs[l].requester][refs[l].candidate];
    return load;
  };

  // Degree repair: drop the cheapest links of over-budget satellites,
  // sparing a requester's last capacity source when possible.
  for (const auto& [sat, incident] : index.incident) {
    while (load_of(sat) > index.budget.at(sat)) {
      int drop = -1;
      double drop_cap = 0.0;
      bool drop_orphans = true;
      for (int l : incident) {
        const LinkRef& ref = refs[l];
        if (!links[ref.requester][ref.candidate]) continue;
        const bool orphans = orphan_if_dropped(ref);
        const double cap = capacity_of(ref);
        if (drop < 0 || (orphans == drop_orphans && cap < drop_cap) ||
            (!orphans && drop_orphans)) {
          drop = l;
          drop_cap = cap;
          drop_orphans = orphans;
        }
      }
      if (drop < 0) break;
      links[refs[drop].requester][refs[drop].candidate] = 0;
    }
  }

  // Servability repair: a requester with no G2S fallback must keep a link.
  for (std::size_t r = 0; r < n_req; ++r) {
    const auto& req = inst.requesters[r];
    if (req.g2s_capacity_bps > 0.0 || req.candidates.empty()) continue;
    if (active_count(r) > 0) continue;
    if (index.budget.at(req.sat_id) < 1) continue;  // genuinely unservable
    int best = -1;
    double best_cap = 0.0;
    for (std::size_t c = 0; c < req.candidates.size(); ++c) {
      const int peer = req.candidates[c].sat_id;
      if (load_of(peer) >= index.budget.at(peer)) continue;
      if (best < 0 || req.candidates[c].capacity_bps > best_cap) {
        best = static_cast<int>(c);
        best_cap = req.candidates[c].capacity_bps;
      }
    }
    if (best >= 0) {
      links[r][best] = 1;
      continue;
    }
    // All peers saturated: swap in by evicting a cheaper non-critical link.
    for (std::size_t c = 0; c < req.candidates.size(); ++c) {
      const int peer = req.candidates[c].sat_id;
      int evict = -1;
      double evict_cap = 0.0;
      for (int l : index.incident.at(peer)) {
        const LinkRef& ref = refs[l];
        if (!links[ref.requester][ref.candidate]) continue;
        if (ref.requester == static_cast<int>(r)) continue;
        if (orphan_if_dropped(ref)) continue;
        const double cap = capacity_of(ref);
        if (evict < 0 || cap < evict_cap) {
          evict = l;
          evict_cap = cap;
        }
      }
      if (evict >= 0) {
        links[refs[evict].requester][refs[evict].candidate] = 0;
        links[r][c] = 1;
        break;
      }
    }
  }

  if (fill_budget) {
    // Spend leftover budget on the strongest idle links, best capacity first.
    std::vector<int> order(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return capacity_of(refs[a]) > capacity_of(refs[b]);
    });
    for (int l : order) {
      const LinkRef& ref = refs[l];
      if (links[ref.requester][ref.candidate]) continue;
      if (capacity_of(ref) <= 0.0) continue;
      const int req_sat = inst.requesters[ref.requester].sat_id;
      const int peer = inst.requesters[ref.requester].candidates[ref.candidate].sat_id;
      if (load_of(req_sat) >= index.budget.at(req_sat)) continue;
      if (load_of(peer) >= index.budget.at(peer)) continue;
      links[ref.requester][ref.candidate] = 1;
    }
  }
  return links;
}

AssociationSolution epm_associate(const CachedInstance& inst,
                                  const EpmOptions& options) {
  inst.validate();
  if (options.epsilon0 <= 0.0 || options.growth <= 1.0 ||
      options.tolerance <= 0.0)
    throw std::invalid_argument("epm_associate: need epsilon0 > 0, growth > 1, tolerance > 0");
  const LinkIndex index(inst);
  const int dim = index.total;
  AssociationSolution solution;

  std::vector<double> pi(dim, 0.0);
  std::vector<double> v(dim, 0.0);
  const double target = static_cast<double>(dim);
  const double scale = std::sqrt(target);

  // Deterministic capacity-then-index tie-break applied to the direction fed
  // into the v-step; a fully symmetric instance would otherwise stall with a
  // fractional pi and a constant residual.
  std::vector<double> tie_bias(dim, 0.0);
  {
    double max_cap = 0.0;
    for (const auto& req : inst.requesters)
      for (const auto& c : req.candidates)
        max_cap = std::max(max_cap, c.capacity_bps);
    int idx = 0;
    for (const auto& req : inst.requesters)
      for (const auto& c : req.candidates) {
        tie_bias[idx] = 1e-9 * (max_cap > 0.0 ? c.capacity_bps / max_cap : 0.0) +
                        1e-12 * static_cast<double>(dim - idx);
        ++idx;
      }
  }

  if (dim > 0) {
    double epsilon = options.epsilon0;
    double residual = target;
    for (int l = 0; l < options.max_outer_iterations; ++l) {
      pi = solve_pi_subproblem(v, epsilon, inst, &pi);
      std::vector<double> direction(dim);
      for (int i = 0; i < dim; ++i) direction[i] = pi[i] + tie_bias[i];
      v = update_v(direction, scale);
      double inner = 0.0;
      for (int i = 0; i < dim; ++i) inner += pi[i] * v[i];
      const double prev_residual = residual;
      residual = target - inner;
      solution.trace.push_back(
          {l, cached_objective_relaxed(pi, inst), residual, epsilon});
      if (std::abs(residual) <= options.tolerance) break;
      // Exactly tied capacities leave coordinates fractional with no penalty
      // force on them (the v direction vanishes there). Once the residual
      // freezes, snap to the rounded full-degree vertex: a binary feasible pi
      // aligned with its own v closes the residual exactly.
      if (std::abs(residual - prev_residual) <= 1e-12) {
        auto snapped = round_and_repair(pi, inst, true);
        int idx = 0;
        for (std::size_t r = 0; r < snapped.size(); ++r)
          for (std::size_t c = 0; c < snapped[r].size(); ++c)
            pi[idx++] = snapped[r][c] ? 1.0 : -1.0;
        for (int i = 0; i < dim; ++i) direction[i] = pi[i] + tie_bias[i];
        v = update_v(direction, scale);
        inner = 0.0;
        for (int i = 0; i < dim; ++i) inner += pi[i] * v[i];
        residual = target - inner;
        solution.trace.push_back(
            {l + 1, cached_objective_relaxed(pi, inst), residual, epsilon});
        if (std::abs(residual) <= options.tolerance) break;
      }
      epsilon *= options.growth;
      if (l + 1 == options.max_outer_iterations)
        solution.iteration_cap_hit = true;
    }
  }

  solution.links = round_and_repair(pi, inst, true);
  attach_ratios(inst, solution);
  return solution;
}

void attach_ratios(const CachedInstance& inst, AssociationSolution& solution) {
  const std::size_t n_req = inst.requesters.size();
  solution.ratios.assign(n_req, {});
  solution.gs_ratio.assign(n_req, 0.0);
  solution.phase1_delay_s.assign(n_req, 0.0);
  solution.servable.assign(n_req, 1);
  solution.objective_s = 0.0;
  for (std::size_t r = 0; r < n_req; ++r) {
    const auto& req = inst.requesters[r];
    solution.ratios[r].assign(req.candidates.size(), 0.0);
    const double total = requester_capacity(req, solution.links[r]);
    if (total <= 0.0) {
      solution.servable[r] = 0;
      continue;
    }
    for (std::size_t c = 0; c < req.candidates.size(); ++c)
      if (solution.links[r][c])
        solution.ratios[r][c] = req.candidates[c].capacity_bps / total;
    solution.gs_ratio[r] = req.g2s_capacity_bps / total;
    solution.phase1_delay_s[r] = req.file_packets * inst.packet_bits / total;
    solution.objective_s += solution.phase1_delay_s[r];
  }
}

}  // namespace saginopt
