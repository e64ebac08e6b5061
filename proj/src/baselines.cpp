#include "saginopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "saginopt/cached_solver.hpp"
#include "saginopt/noncached_solver.hpp"
#include "saginopt/optcore.hpp"

namespace saginopt {

namespace {

std::map<int, int> initial_budgets(const CachedInstance& inst) {
  std::map<int, int> budget;
  auto budget_of = [&](int sat) {
    int used = 0;
    if (auto it = inst.degree_consumed.find(sat); it != inst.degree_consumed.end())
      used = it->second;
    return std::max(0, inst.max_isl - used);
  };
  for (const auto& req : inst.requesters) {
    budget.try_emplace(req.sat_id, budget_of(req.sat_id));
    for (const auto& c : req.candidates)
      budget.try_emplace(c.sat_id, budget_of(c.sat_id));
  }
  return budget;
}

// Delay of one requester under an assignment; unserved requesters carry a
// large constant so that enumeration both prefers serving everybody and
// stays additive for pruning.
constexpr double kUnservedPenalty = 1.0e6;

struct Enumerator {
  const CachedInstance& inst;
  std::map<int, int> load;
  std::vector<std::vector<std::uint8_t>> current;
  std::vector<std::vector<std::uint8_t>> best;
  double best_objective = std::numeric_limits<double>::infinity();

  explicit Enumerator(const CachedInstance& instance) : inst(instance) {
    current.resize(inst.requesters.size());
    for (std::size_t r = 0; r < inst.requesters.size(); ++r)
      current[r].assign(inst.requesters[r].candidates.size(), 0);
  }

  void run(std::size_t r, double partial) {
    if (partial >= best_objective) return;
    if (r == inst.requesters.size()) {
      best_objective = partial;
      best = current;
      return;
    }
    const auto& req = inst.requesters[r];
    const int nc = static_cast<int>(req.candidates.size());
    const int own_budget = budget_left(req.sat_id);
    for (int mask = 0; mask < (1 << nc); ++mask) {
      const int picked = __builtin_popcount(static_cast<unsigned>(mask));
      if (picked > inst.max_isl || picked > own_budget) continue;
      bool ok = true;
      double cap = req.g2s_capacity_bps;
      for (int c = 0; c < nc && ok; ++c) {
        if (!(mask >> c & 1)) continue;
        if (budget_left(req.candidates[c].sat_id) < 1) ok = false;
        cap += req.candidates[c].capacity_bps;
      }
      if (!ok) continue;
      const double delay = cap > 0.0
                               ? req.file_packets * inst.packet_bits / cap
                               : kUnservedPenalty;
      apply(r, mask, +1);
      run(r + 1, partial + delay);
      apply(r, mask, -1);
    }
  }

  int budget_left(int sat) {
    int used = 0;
    if (auto it = load.find(sat); it != load.end()) used = it->second;
    int cap = inst.max_isl;
    if (auto it = inst.degree_consumed.find(sat); it != inst.degree_consumed.end())
      cap -= it->second;
    return cap - used;
  }

  void apply(std::size_t r, int mask, int sign) {
    const auto& req = inst.requesters[r];
    for (std::size_t c = 0; c < req.candidates.size(); ++c) {
      const bool on = (mask >> c) & 1;
      current[r][c] = sign > 0 && on ? 1 : 0;
      if (on) {
        load[req.sat_id] += sign;
        load[req.candidates[c].sat_id] += sign;
      }
    }
  }
};

}  // namespace

AssociationSolution exhaustive_cached(const CachedInstance& inst,
                                      int max_binary_vars) {
  inst.validate();
  int total = 0;
  for (const auto& req : inst.requesters)
    total += static_cast<int>(req.candidates.size());
  if (total > max_binary_vars)
    throw std::invalid_argument(
        "exhaustive_cached: instance exceeds the enumeration guard");
  Enumerator e(inst);
  e.run(0, 0.0);
  AssociationSolution solution;
  solution.links = std::move(e.best);
  if (solution.links.empty()) {
    solution.links.resize(inst.requesters.size());
    for (std::size_t r = 0; r < inst.requesters.size(); ++r)
      solution.links[r].assign(inst.requesters[r].candidates.size(), 0);
  }
  attach_ratios(inst, solution);
  return solution;
}

AssociationSolution greedy_cached(const CachedInstance& inst) {
  inst.validate();
  std::map<int, int> budget = initial_budgets(inst);
  std::vector<std::size_t> order(inst.requesters.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.requesters[a].file_packets > inst.requesters[b].file_packets;
  });

  AssociationSolution solution;
  solution.links.resize(inst.requesters.size());
  for (std::size_t idx : order) {
    const auto& req = inst.requesters[idx];
    solution.links[idx].assign(req.candidates.size(), 0);
    std::vector<std::size_t> by_capacity(req.candidates.size());
    std::iota(by_capacity.begin(), by_capacity.end(), 0);
    std::stable_sort(by_capacity.begin(), by_capacity.end(),
                     [&](std::size_t a, std::size_t b) {
                       return req.candidates[a].capacity_bps >
                              req.candidates[b].capacity_bps;
                     });
    int taken = 0;
    for (std::size_t c : by_capacity) {
      if (taken >= inst.max_isl || budget[req.sat_id] < 1) break;
      if (budget[req.candidates[c].sat_id] < 1) continue;
      solution.links[idx][c] = 1;
      --budget[req.sat_id];
      --budget[req.candidates[c].sat_id];
      ++taken;
    }
  }
  attach_ratios(inst, solution);
  return solution;
}

AssociationSolution random_cached(const CachedInstance& inst, RngStream& rng) {
  inst.validate();
  std::map<int, int> budget = initial_budgets(inst);
  AssociationSolution solution;
  solution.links.resize(inst.requesters.size());
  for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
    const auto& req = inst.requesters[r];
    solution.links[r].assign(req.candidates.size(), 0);
    std::vector<std::size_t> perm(req.candidates.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.next_int(0, static_cast<int>(i) - 1)]);
    const int most =
        std::min<int>(inst.max_isl, static_cast<int>(req.candidates.size()));
    // Requesters without a ground fallback must try to keep one link.
    const int least = req.g2s_capacity_bps > 0.0 ? 0 : std::min(1, most);
    int want = static_cast<int>(rng.next_int(least, most));
    int taken = 0;
    for (std::size_t c : perm) {
      if (taken >= want || budget[req.sat_id] < 1) break;
      if (budget[req.candidates[c].sat_id] < 1) continue;
      solution.links[r][c] = 1;
      --budget[req.sat_id];
      --budget[req.candidates[c].sat_id];
      ++taken;
    }
  }
  attach_ratios(inst, solution);
  return solution;
}

NonCachedSolution equal_bandwidth(const NonCachedInstance& inst) {
  inst.validate();
  std::vector<double> omega = equal_split_omega(inst);
  auto links = associate_relays(inst, omega);
  return finalize_noncached(std::move(links), std::move(omega), inst);
}

NonCachedSolution rounding_assoc(const NonCachedInstance& inst) {
  inst.validate();
  std::vector<double> omega = equal_split_omega(inst);

  // Candidate view with the harmonic path capacities at the initial split.
  CachedInstance view;
  view.packet_bits = inst.packet_bits;
  view.max_isl = inst.max_isl;
  view.degree_consumed = inst.degree_consumed;
  std::vector<int> mapping;
  for (std::size_t r = 0; r < inst.case2.size(); ++r) {
    const auto& req = inst.case2[r];
    CachedRequester q;
    q.sat_id = req.sat_id;
    q.file_packets = req.file_packets;
    bool reachable = false;
    for (const auto& relay : req.relays) {
      const double cap = path_capacity(inst, relay, omega);
      reachable |= cap > 0.0;
      q.candidates.push_back({relay.sat_id, cap, relay.prop_delay_s});
    }
    if (!reachable) continue;
    mapping.push_back(static_cast<int>(r));
    view.requesters.push_back(std::move(q));
  }

  std::vector<std::vector<std::uint8_t>> links(inst.case2.size());
  for (std::size_t r = 0; r < inst.case2.size(); ++r)
    links[r].assign(inst.case2[r].relays.size(), 0);

  if (!view.requesters.empty()) {
    // Relaxed association in [0,1]: reuse the penalized subproblem with a
    // zero penalty, which is exactly the relaxation of the binary program.
    int dim = 0;
    for (const auto& q : view.requesters)
      dim += static_cast<int>(q.candidates.size());
    std::vector<double> zero_v(dim, 0.0);
    std::vector<double> relaxed = solve_pi_subproblem(zero_v, 0.0, view);
    // pi maps to u = (pi+1)/2; u > 1/2 rounds up, ties round down.
    auto rounded = round_and_repair(relaxed, view);
    for (std::size_t i = 0; i < mapping.size(); ++i)
      links[mapping[i]] = rounded[i];
  }

  omega = bandwidth_step(links, omega, inst);
  return finalize_noncached(std::move(links), std::move(omega), inst);
}

}  // namespace saginopt
