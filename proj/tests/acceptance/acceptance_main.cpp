// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion also carries a wall-clock budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "saginopt/baselines.hpp"
#include "saginopt/cached_solver.hpp"
#include "saginopt/fading.hpp"
#include "saginopt/harness.hpp"
#include "saginopt/linkmodel.hpp"
#include "saginopt/noncached_solver.hpp"
#include "saginopt/scenario.hpp"

using namespace saginopt;

namespace {

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<bool(std::string&)> body;
};

int failures = 0;

void report(const Criterion& c, bool ok, double elapsed, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%.1f s%s%s)\n", ok ? "PASS" : "FAIL",
              c.id, c.name, elapsed, detail.empty() ? "" : "; ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double crossing_db(const PerModel& model, double level) {
  double lo = -5.0, hi = 35.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (per_upper_bound(db_to_linear(mid), model) > level)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

CachedInstance random_cached_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cap(0.5, 8.0);
  CachedInstance inst;
  inst.max_isl = 2;
  inst.packet_bits = 1080.0;
  const int n_req = 2 + static_cast<int>(rng() % 3);  // 2..4 requesters
  int total = 0;
  for (int r = 0; r < n_req; ++r) {
    CachedRequester q;
    q.sat_id = 1000 + r;
    q.file_packets = 200.0 + static_cast<double>(rng() % 2000);
    const int nc = 2 + static_cast<int>(rng() % 4);  // 2..5 candidates
    for (int c = 0; c < nc && total + c < 24; ++c)
      q.candidates.push_back({static_cast<int>(rng() % 7), cap(rng) * 1e6, 0.0});
    std::sort(q.candidates.begin(), q.candidates.end(),
              [](const auto& a, const auto& b) { return a.sat_id < b.sat_id; });
    q.candidates.erase(std::unique(q.candidates.begin(), q.candidates.end(),
                                   [](const auto& a, const auto& b) {
                                     return a.sat_id == b.sat_id;
                                   }),
                       q.candidates.end());
    total += static_cast<int>(q.candidates.size());
    q.g2s_capacity_bps = (rng() % 3 == 0) ? cap(rng) * 1e6 : 0.0;
    if (q.candidates.empty() && q.g2s_capacity_bps <= 0.0)
      q.g2s_capacity_bps = 1e6;
    inst.requesters.push_back(std::move(q));
  }
  return inst;
}

NonCachedInstance random_noncached_instance(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cap(10.0, 150.0);
  std::uniform_real_distribution<double> cc(2.0, 30.0);
  NonCachedInstance inst;
  inst.packet_bits = 1080.0;
  inst.max_isl = 2;
  const int n_relays = 1 + static_cast<int>(rng() % 3);  // 1..3
  const int n_req = 1 + static_cast<int>(rng() % 2);     // 1..2
  for (int s = 0; s < n_relays; ++s)
    inst.band_slots.push_back({0, 200 + s, cc(rng), 1e8});
  for (int r = 0; r < n_req; ++r) {
    NonCachedRequester q;
    q.sat_id = 100 + r;
    q.file_packets = 200.0 + static_cast<double>(rng() % 1500);
    for (int s = 0; s < n_relays; ++s)
      q.relays.push_back({200 + s, cap(rng) * 1e6, s, 0.0});
    inst.case2.push_back(std::move(q));
  }
  return inst;
}

// Exhaustive association x omega-simplex-grid oracle for the non-cached
// problem; download ratios take their exact equalizing values.
double noncached_bruteforce(const NonCachedInstance& inst, int grid_steps) {
  const int n_relays = static_cast<int>(inst.band_slots.size());
  const int n_req = static_cast<int>(inst.case2.size());
  double best = 1e300;
  std::vector<std::vector<std::uint8_t>> links(n_req);
  std::vector<unsigned> masks(n_req, 1);
  std::function<void(int)> scan_masks = [&](int r) {
    if (r == n_req) {
      for (int p = 0; p < n_relays; ++p) {
        int load = 0;
        for (int q = 0; q < n_req; ++q) load += (masks[q] >> p) & 1;
        if (load > inst.max_isl) return;
      }
      for (int q = 0; q < n_req; ++q) {
        if (__builtin_popcount(masks[q]) > inst.max_isl) return;
        links[q].assign(n_relays, 0);
        for (int p = 0; p < n_relays; ++p) links[q][p] = (masks[q] >> p) & 1;
      }
      std::vector<double> omega(n_relays, 0.0);
      std::vector<int> units(n_relays, 0);
      std::function<void(int, int)> scan_omega = [&](int pos, int left) {
        if (pos == n_relays - 1) {
          units[pos] = left;
          for (int p = 0; p < n_relays; ++p)
            omega[p] = std::max(
                inst.omega_floor,
                static_cast<double>(units[p]) / grid_steps);
          best = std::min(best, noncached_objective(links, omega, inst));
          return;
        }
        for (int take = 0; take <= left; ++take) {
          units[pos] = take;
          scan_omega(pos + 1, left - take);
        }
      };
      scan_omega(0, grid_steps);
      return;
    }
    const unsigned count = 1u << n_relays;
    for (unsigned m = 1; m < count; ++m) {
      masks[r] = m;
      scan_masks(r + 1);
    }
  };
  scan_masks(0);
  return best;
}

ScenarioSpec desk_scenario(std::uint64_t seed) {
  ScenarioSpec spec = default_scenario();
  spec.num_planes = 5;
  spec.sats_per_plane = 8;  // 40 satellites
  spec.num_aircraft = 12;
  spec.num_slots = 50;
  spec.request_probability = 1.0;
  spec.cache.hit_probability = 0.4;
  spec.rng_seed = seed;
  // Narrow feeder bands and matched heavy files keep the delays in the
  // transmission-dominated regime the delivery model optimizes.
  spec.isl_link.bandwidth_hz = 1.0e6;
  spec.g2s_link.bandwidth_hz = 1.0e6;
  for (auto& [type, mix] : spec.file_mix) {
    mix.packets_lo = 2000;
    mix.packets_hi = 5000;
  }
  // ground stations only (gateways would bypass the satellite segment),
  // ordered so that any prefix keeps global coverage
  spec.ground_nodes = {{40.0, -105.0, GroundRole::GroundStation},
                       {-33.9, 151.2, GroundRole::GroundStation},
                       {48.9, 2.3, GroundRole::GroundStation},
                       {-23.5, -46.6, GroundRole::GroundStation},
                       {35.7, 139.7, GroundRole::GroundStation}};
  return spec;
}

struct ClassMeans {
  double cached = 0.0;
  double noncached = 0.0;
  int cached_files = 0;
  int noncached_files = 0;
};

ClassMeans run_desk(const ScenarioSpec& spec, int slots) {
  ClassMeans means;
  const CachePlacement cache = place_cache(spec);
  for (int t = 0; t < slots; ++t) {
    TimeSlotTopology topo = build_topology(propagate(spec, t), spec);
    topo.cache = cache;
    const SlotProblems problems =
        build_slot_problems(spec, topo, generate_requests(spec, t));
    const SlotOutcome outcome =
        evaluate_slot(problems, "epm", "ao", spec.rng_seed + t);
    for (const auto& d : outcome.cached_files) {
      means.cached += d.total_s;
      ++means.cached_files;
    }
    for (const auto& d : outcome.noncached_files) {
      means.noncached += d.total_s;
      ++means.noncached_files;
    }
  }
  if (means.cached_files) means.cached /= means.cached_files;
  if (means.noncached_files) means.noncached /= means.noncached_files;
  return means;
}

bool criterion1_per_anchors(std::string& detail) {
  const double ils = crossing_db(ils_model(1023), 1e-2);
  const double loo = crossing_db(loo_model(1023), 1e-2);
  char buf[128];
  std::snprintf(buf, sizeof buf, "ILS crossing %.2f dB, Loo crossing %.2f dB",
                ils, loo);
  detail = buf;
  return std::abs(ils - 16.0) <= 2.0 && std::abs(loo - 7.0) <= 2.0;
}

std::vector<std::pair<CachedInstance, AssociationSolution>> g_cached_solutions;

bool criterion2_cached_oracle(std::string& detail) {
  std::mt19937_64 rng(1001);
  int exact = 0;
  double worst_gap = 0.0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    CachedInstance inst = random_cached_instance(rng);
    AssociationSolution epm = epm_associate(inst);
    AssociationSolution oracle = exhaustive_cached(inst);
    const double gap =
        (epm.objective_s - oracle.objective_s) / oracle.objective_s;
    worst_gap = std::max(worst_gap, gap);
    if (gap <= 1e-9) ++exact;
    g_cached_solutions.emplace_back(std::move(inst), std::move(epm));
    if (gap > 0.05) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "trial %d gap %.3f%%", trial, gap * 100.0);
      detail = buf;
      return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d exact, worst gap %.3f%%", exact,
                trials, worst_gap * 100.0);
  detail = buf;
  return exact >= trials * 8 / 10;
}

std::vector<std::pair<NonCachedInstance, NonCachedSolution>> g_noncached_solutions;

bool criterion3_noncached_oracle(std::string& detail) {
  std::mt19937_64 rng(2002);
  double worst_gap = -1.0;
  const int trials = 25;
  for (int trial = 0; trial < trials; ++trial) {
    NonCachedInstance inst = random_noncached_instance(rng);
    NonCachedSolution sol = ao_solve(inst);
    const double oracle = noncached_bruteforce(inst, 100);
    const double gap = std::abs(sol.objective_s - oracle) / oracle;
    worst_gap = std::max(worst_gap, gap);
    g_noncached_solutions.emplace_back(std::move(inst), std::move(sol));
    if (gap > 0.05) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "trial %d gap %.3f%%", trial, gap * 100.0);
      detail = buf;
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst gap %.4f%%", worst_gap * 100.0);
  detail = buf;
  return true;
}

bool criterion4_equalized_delays(std::string& detail) {
  // Every solver output carries equalized per-link transmission delays.
  for (const auto& [inst, sol] : g_cached_solutions) {
    for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
      if (!sol.servable[r]) continue;
      const auto& req = inst.requesters[r];
      const double bits = req.file_packets * inst.packet_bits;
      double lo = 1e300, hi = 0.0;
      for (std::size_t c = 0; c < req.candidates.size(); ++c) {
        if (!sol.links[r][c]) continue;
        const double d = sol.ratios[r][c] * bits / req.candidates[c].capacity_bps;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (sol.gs_ratio[r] > 0.0) {
        const double d = sol.gs_ratio[r] * bits / req.g2s_capacity_bps;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (hi > 0.0 && (hi - lo) / hi > 1e-9) {
        detail = "cached solution with unequal active-link delays";
        return false;
      }
    }
  }
  for (const auto& [inst, sol] : g_noncached_solutions) {
    for (std::size_t r = 0; r < inst.case2.size(); ++r) {
      if (!sol.assoc.servable[r]) continue;
      const auto& req = inst.case2[r];
      const double bits = req.file_packets * inst.packet_bits;
      double lo = 1e300, hi = 0.0;
      for (std::size_t p = 0; p < req.relays.size(); ++p) {
        if (!sol.assoc.links[r][p]) continue;
        const double cap = path_capacity(inst, req.relays[p], sol.omega);
        const double d = sol.assoc.ratios[r][p] * bits / cap;
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      if (hi > 0.0 && (hi - lo) / hi > 1e-9) {
        detail = "relay solution with unequal active-path delays";
        return false;
      }
    }
  }

  // The closed-form equalized delay lower-bounds the max-form objective over
  // random feasible download ratios on the same association.
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int instances_checked = 0;
  for (const auto& [inst, sol] : g_cached_solutions) {
    if (instances_checked >= 10) break;
    ++instances_checked;
    for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
      if (!sol.servable[r]) continue;
      const auto& req = inst.requesters[r];
      const double bits = req.file_packets * inst.packet_bits;
      std::vector<int> active;
      for (std::size_t c = 0; c < req.candidates.size(); ++c)
        if (sol.links[r][c]) active.push_back(static_cast<int>(c));
      const bool has_gs = req.g2s_capacity_bps > 0.0;
      const int legs = static_cast<int>(active.size()) + (has_gs ? 1 : 0);
      if (legs == 0) continue;
      for (int sample = 0; sample < 10000; ++sample) {
        std::vector<double> rho(legs);
        double total = 0.0;
        for (double& v : rho) {
          v = u(rng) + 1e-9;
          total += v;
        }
        double worst = 0.0;
        for (int leg = 0; leg < legs; ++leg) {
          rho[leg] /= total;
          const double cap = leg < static_cast<int>(active.size())
                                 ? req.candidates[active[leg]].capacity_bps
                                 : req.g2s_capacity_bps;
          worst = std::max(worst, rho[leg] * bits / cap);
        }
        if (sol.phase1_delay_s[r] > worst + 1e-9) {
          detail = "equalized delay exceeded a feasible max-form objective";
          return false;
        }
      }
    }
  }
  detail = "equal-delay and lower-bound checks over all stored solutions";
  return true;
}

bool criterion5_binary_coupling(std::string& detail) {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int members = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const int n = 1 + static_cast<int>(rng() % 5);
    const std::size_t size = static_cast<std::size_t>(m) * n;
    std::vector<double> uu(size), vv(size);
    const int mode = trial % 5;
    for (std::size_t i = 0; i < size; ++i) {
      if (mode == 0) {  // planted sign matrices
        uu[i] = rng() % 2 ? 1.0 : -1.0;
        vv[i] = uu[i];
      } else if (mode == 1) {  // near-boundary perturbations
        uu[i] = (rng() % 2 ? 1.0 : -1.0) * (1.0 - 1e-3 * u(rng) * u(rng));
        vv[i] = uu[i];
      } else {
        uu[i] = u(rng);
        vv[i] = u(rng);
      }
    }
    if (!binary_coupling_member(uu, vv, m, n)) continue;
    ++members;
    for (std::size_t i = 0; i < size; ++i) {
      if (std::abs(std::abs(uu[i]) - 1.0) > 1e-8 ||
          std::abs(std::abs(vv[i]) - 1.0) > 1e-7 ||
          std::abs(uu[i] - vv[i]) > 1e-4) {
        detail = "found a non-binary member of the coupling set";
        return false;
      }
    }
  }
  // directed boundary cases: one fractional entry must break membership
  for (double frac : {0.9, 0.99, 1.0 - 1e-5}) {
    std::vector<double> uu(12, 1.0), vv(12, 1.0);
    uu[4] = frac;
    if (binary_coupling_member(uu, vv, 3, 4)) {
      detail = "fractional entry accepted";
      return false;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d members found, all binary", members);
  detail = buf;
  return members > 0;
}

bool criterion6_sca_properties(std::string& detail) {
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_real_distribution<double> cgen(0.5, 40.0);
  for (int instance = 0; instance < 20; ++instance) {
    const double c = cgen(rng);
    const double rho0 = u(rng);
    const double omega0 = u(rng);
    // tangency
    if (std::abs(sca_upper_bound(rho0, omega0, rho0, omega0, c) -
                 sca_product(rho0, omega0, c)) > 1e-10) {
      detail = "tangency violated";
      return false;
    }
    // majorization on random feasible points
    for (int k = 0; k < 1000; ++k) {
      const double rho = u(rng);
      const double omega = u(rng);
      if (sca_upper_bound(rho, omega, rho0, omega0, c) <
          sca_product(rho, omega, c) - 1e-10) {
        detail = "majorization violated";
        return false;
      }
    }
    // first-order match at the expansion point
    const double h = 1e-6;
    const double fd_rho_bar =
        (sca_upper_bound(rho0 + h, omega0, rho0, omega0, c) -
         sca_upper_bound(rho0 - h, omega0, rho0, omega0, c)) /
        (2.0 * h);
    const double fd_omega_bar =
        (sca_upper_bound(rho0, omega0 + h, rho0, omega0, c) -
         sca_upper_bound(rho0, omega0 - h, rho0, omega0, c)) /
        (2.0 * h);
    const double fd_rho = (sca_product(rho0 + h, omega0, c) -
                           sca_product(rho0 - h, omega0, c)) /
                          (2.0 * h);
    const double fd_omega = (sca_product(rho0, omega0 + h, c) -
                             sca_product(rho0, omega0 - h, c)) /
                            (2.0 * h);
    if (std::abs(fd_rho_bar - fd_rho) > 1e-4 * std::abs(fd_rho) ||
        std::abs(fd_omega_bar - fd_omega) > 1e-4 * std::abs(fd_omega)) {
      detail = "expansion-point gradient mismatch";
      return false;
    }
  }
  detail = "tangency, majorization and gradients on 20 instances";
  return true;
}

bool criterion7_convergence(std::string& detail) {
  ScenarioSpec spec = default_scenario();  // full 120-satellite constellation
  spec.num_aircraft = 20;
  spec.request_probability = 1.0;
  spec.rng_seed = 12;
  const CachePlacement cache = place_cache(spec);
  bool saw_cached = false, saw_noncached = false;
  double final_residual = -1.0;
  std::size_t ao_iterations = 0;
  for (int t = 0; t < 40 && (!saw_cached || !saw_noncached); ++t) {
    TimeSlotTopology topo = build_topology(propagate(spec, t), spec);
    topo.cache = cache;
    const SlotProblems problems =
        build_slot_problems(spec, topo, generate_requests(spec, t));
    if (!saw_cached && !problems.cached.requesters.empty()) {
      AssociationSolution sol = epm_associate(problems.cached);
      if (sol.trace.empty()) continue;
      final_residual = std::abs(sol.trace.back().residual);
      if (final_residual > 1e-5) {
        detail = "penalty residual above tolerance";
        return false;
      }
      saw_cached = true;
    }
    if (!saw_noncached && !problems.noncached.case2.empty()) {
      NonCachedSolution sol = ao_solve(problems.noncached);
      ao_iterations = sol.outer_trace.size();
      for (std::size_t i = 1; i < sol.outer_trace.size(); ++i)
        if (sol.outer_trace[i].objective_s >
            sol.outer_trace[i - 1].objective_s + 1e-12) {
          detail = "outer objective increased";
          return false;
        }
      if (ao_iterations > 30) {
        detail = "alternating optimization needed more than 30 iterations";
        return false;
      }
      saw_noncached = true;
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "penalty residual %.2e, alternating iterations %zu",
                final_residual, ao_iterations);
  detail = buf;
  return saw_cached && saw_noncached;
}

bool criterion8_trends(std::string& detail) {
  const int seeds = 5;
  const int slots = 2;

  // (a) delay versus the ISL cap, with the unconstrained reference
  std::vector<int> caps = {1, 2, 4};
  std::map<int, double> mean_by_cap;
  double fully_connected = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    for (int cap : caps) {
      ScenarioSpec spec = desk_scenario(100 + seed);
      spec.max_isl = cap;
      const ClassMeans m = run_desk(spec, slots);
      const int files = m.cached_files + m.noncached_files;
      if (files)
        mean_by_cap[cap] += (m.cached * m.cached_files +
                             m.noncached * m.noncached_files) /
                            files / seeds;
    }
    ScenarioSpec spec = desk_scenario(100 + seed);
    spec.max_isl = spec.num_satellites();
    const ClassMeans m = run_desk(spec, slots);
    const int files = m.cached_files + m.noncached_files;
    if (files)
      fully_connected += (m.cached * m.cached_files +
                          m.noncached * m.noncached_files) /
                         files / seeds;
  }
  for (std::size_t i = 1; i < caps.size(); ++i)
    if (mean_by_cap[caps[i]] > mean_by_cap[caps[i - 1]] * 1.02) {
      detail = "delay not non-increasing in the ISL cap";
      return false;
    }
  if (!(mean_by_cap[caps.back()] <= fully_connected * 1.05 &&
        mean_by_cap[caps.back()] >= fully_connected * 0.95)) {
    detail = "largest ISL cap did not converge to the unconstrained value";
    return false;
  }

  // (b) delay versus the number of ground stations, split by traffic class
  double cached_few = 0.0, cached_many = 0.0;
  double noncached_few = 0.0, noncached_many = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    ScenarioSpec many = desk_scenario(200 + seed);
    ScenarioSpec few = many;
    few.ground_nodes.resize(3);
    const ClassMeans m_many = run_desk(many, slots);
    const ClassMeans m_few = run_desk(few, slots);
    cached_few += m_few.cached / seeds;
    cached_many += m_many.cached / seeds;
    noncached_few += m_few.noncached / seeds;
    noncached_many += m_many.noncached / seeds;
  }
  if (!(cached_many <= cached_few * 1.02)) {
    detail = "cached delay grew with more ground stations";
    return false;
  }
  if (!(noncached_many < noncached_few)) {
    detail = "non-cached delay did not drop with more ground stations";
    return false;
  }
  const double cached_drop = (cached_few - cached_many) / cached_few;
  const double noncached_drop = (noncached_few - noncached_many) / noncached_few;
  if (!(noncached_drop > cached_drop)) {
    detail = "ground stations helped cached files more than non-cached";
    return false;
  }

  // (c) non-cached exceeds cached at matched load
  double cached_total = 0.0, noncached_total = 0.0;
  for (int seed = 0; seed < seeds; ++seed) {
    const ClassMeans m = run_desk(desk_scenario(300 + seed), slots);
    cached_total += m.cached / seeds;
    noncached_total += m.noncached / seeds;
  }
  if (!(noncached_total > cached_total)) {
    detail = "non-cached delay did not exceed cached delay";
    return false;
  }

  char buf[192];
  std::snprintf(buf, sizeof buf,
                "cap curve %.3f/%.3f/%.3f vs full %.3f; GS drop cached %.0f%% "
                "vs non-cached %.0f%%; class means %.3f < %.3f",
                mean_by_cap[1], mean_by_cap[2], mean_by_cap[4],
                fully_connected, 100.0 * cached_drop, 100.0 * noncached_drop,
                cached_total, noncached_total);
  detail = buf;
  return true;
}

bool criterion9_single_requester(std::string& detail) {
  std::mt19937_64 rng(6006);
  std::uniform_real_distribution<double> cap(0.5, 9.0);
  for (int trial = 0; trial < 20; ++trial) {
    CachedInstance inst;
    inst.max_isl = 1 + static_cast<int>(rng() % 3);
    inst.packet_bits = 1080.0;
    CachedRequester q;
    q.sat_id = 100;
    q.file_packets = 100.0 + static_cast<double>(rng() % 1000);
    const int nc = 2 + static_cast<int>(rng() % 5);
    for (int c = 0; c < nc; ++c) q.candidates.push_back({c, cap(rng) * 1e6, 0.0});
    q.g2s_capacity_bps = (rng() % 2) ? cap(rng) * 1e6 : 0.0;
    inst.requesters.push_back(q);
    const double a = epm_associate(inst).objective_s;
    const double b = greedy_cached(inst).objective_s;
    const double c = exhaustive_cached(inst).objective_s;
    if (std::abs(a - c) > 1e-9 * c || std::abs(b - c) > 1e-9 * c) {
      detail = "objectives diverged on a single-requester instance";
      return false;
    }
  }
  detail = "greedy, penalty and enumeration agree on 20 instances";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "PER bound anchors (ILS 16±2 dB, Loo 7±2 dB)", 30.0,
       criterion1_per_anchors},
      {2, "cached solver within 5% of enumeration, 80% exact", 120.0,
       criterion2_cached_oracle},
      {3, "non-cached solver within 5% of the brute force", 300.0,
       criterion3_noncached_oracle},
      {4, "equalized link delays and ratio-grid dominance", 120.0,
       criterion4_equalized_delays},
      {5, "binary coupling set has only sign-matrix members", 60.0,
       criterion5_binary_coupling},
      {6, "majorizer tangency, dominance and gradient match", 60.0,
       criterion6_sca_properties},
      {7, "penalty residual and alternating convergence at full scale", 300.0,
       criterion7_convergence},
      {8, "delay trends: ISL cap, ground stations, traffic classes", 600.0,
       criterion8_trends},
      {9, "single-requester agreement of greedy, penalty, enumeration", 60.0,
       criterion9_single_requester},
  };

  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > c.budget_s) {
      detail += detail.empty() ? "" : "; ";
      detail += "over time budget";
      ok = false;
    }
    report(c, ok, elapsed, detail);
  }
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
