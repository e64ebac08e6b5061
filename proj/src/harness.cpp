#include "saginopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "saginopt/baselines.hpp"
#include "saginopt/cached_solver.hpp"
#include "saginopt/fading.hpp"
#include "saginopt/noncached_solver.hpp"
#include "saginopt/optcore.hpp"
#include "saginopt/rng.hpp"

namespace saginopt {

namespace {

const std::set<std::string> kExperiments = {
    "delay-vs-requests-cached", "delay-vs-requests-noncached",
    "delay-vs-max-isl",         "delay-vs-gs-count",
    "delay-vs-bandwidth-altitude", "per-vs-snr", "convergence-trace"};

const std::set<std::string> kCachedSchemes = {"epm", "exhaustive", "greedy",
                                              "random"};
const std::set<std::string> kNonCachedSchemes = {"ao", "equal_bandwidth",
                                                 "rounding"};

}  // namespace

void ExperimentConfig::validate() const {
  if (!kExperiments.count(experiment))
    throw ConfigError("experiment: unknown id '" + experiment + "'");
  if (seeds < 1) throw ConfigError("experiment: seeds must be >= 1");
  if (slots < 1) throw ConfigError("experiment: slots must be >= 1");
  const bool needs_sweep =
      experiment != "per-vs-snr" && experiment != "convergence-trace";
  if (needs_sweep && sweep.empty())
    throw ConfigError("experiment: sweep must be nonempty");
  for (const std::string& s : schemes)
    if (!kCachedSchemes.count(s) && !kNonCachedSchemes.count(s))
      throw ConfigError("experiment: unknown scheme '" + s + "'");
  scenario.validate();
}

SlotProblems build_slot_problems(const ScenarioSpec& spec,
                                 const TimeSlotTopology& topo,
                                 const std::vector<FileRequest>& requests) {
  SlotProblems out;
  out.cached.packet_bits = spec.packet_bits;
  out.cached.max_isl = spec.max_isl;
  out.noncached.packet_bits = spec.packet_bits;
  out.noncached.max_isl = spec.max_isl;

  std::map<std::pair<int, int>, int> band_slot_index;  // (gs, relay sat) -> slot

  for (const FileRequest& req : requests) {
    const double bits = req.packets * req.packet_bits;

    // Gateway-direct delivery bypasses the satellite network entirely.
    const auto& gw = topo.aircraft_gateway[req.aircraft];
    if (gw.id >= 0) {
      DelayBreakdown d;
      d.phase2_s = bits / gw.capacity_bps + prop_delay(gw.distance_m);
      d.finalize();
      out.direct.push_back(d);
      continue;
    }

    const auto& s2a = topo.aircraft_sat[req.aircraft];
    if (s2a.id < 0) {
      ++out.unservable;
      continue;
    }
    const int sj = s2a.id;
    const double phase2 = bits / s2a.capacity_bps + prop_delay(s2a.distance_m);

    if (req.cached()) {
      if (topo.cache[sj].count(req.type)) {
        // Already on the serving satellite: phase 2 only.
        DelayBreakdown d;
        d.phase2_s = phase2;
        d.finalize();
        out.direct.push_back(d);
        continue;
      }
      CachedRequester cr;
      cr.sat_id = sj;
      cr.file_packets = req.packets;
      cr.phase2_delay_s = phase2;
      for (const auto& nb : topo.sat_neighbors[sj])
        if (topo.cache[nb.id].count(req.type))
          cr.candidates.push_back(
              {nb.id, nb.capacity_bps, prop_delay(nb.distance_m)});
      const auto& gs = topo.sat_gs[sj];
      if (gs.id >= 0) {
        cr.g2s_capacity_bps = gs.capacity_bps;
        cr.g2s_prop_delay_s = prop_delay(gs.distance_m);
      }
      if (cr.candidates.empty() && cr.g2s_capacity_bps <= 0.0) {
        ++out.unservable;
        continue;
      }
      out.cached.requesters.push_back(std::move(cr));
      continue;
    }

    // Non-cached: direct GS download when visible, two-hop relays otherwise.
    const auto& gs = topo.sat_gs[sj];
    if (gs.id >= 0) {
      Case1Requester c1;
      c1.sat_id = sj;
      c1.file_packets = req.packets;
      c1.g2s_capacity_bps = gs.capacity_bps;
      c1.g2s_prop_delay_s = prop_delay(gs.distance_m);
      c1.phase2_delay_s = phase2;
      out.noncached.case1.push_back(c1);
      continue;
    }
    NonCachedRequester nr;
    nr.sat_id = sj;
    nr.file_packets = req.packets;
    nr.phase2_delay_s = phase2;
    for (const auto& nb : topo.sat_neighbors[sj]) {
      const auto& relay_gs = topo.sat_gs[nb.id];
      if (relay_gs.id < 0) continue;  // relays must reach a ground station
      const auto key = std::make_pair(relay_gs.id, nb.id);
      auto it = band_slot_index.find(key);
      if (it == band_slot_index.end()) {
        BandSlot slot;
        slot.gs_id = relay_gs.id;
        slot.sat_id = nb.id;
        slot.c_const = g2s_c_const(spec.g2s_link, relay_gs.distance_m);
        slot.bandwidth_hz = spec.g2s_link.bandwidth_hz;
        it = band_slot_index
                 .emplace(key, static_cast<int>(out.noncached.band_slots.size()))
                 .first;
        out.noncached.band_slots.push_back(slot);
      }
      nr.relays.push_back(
          {nb.id, nb.capacity_bps, it->second,
           prop_delay(relay_gs.distance_m) + prop_delay(nb.distance_m)});
    }
    if (nr.relays.empty()) {
      ++out.unservable;
      continue;
    }
    out.noncached.case2.push_back(std::move(nr));
  }
  return out;
}

namespace {

DelayBreakdown cached_breakdown(const CachedInstance& inst,
                                const AssociationSolution& sol, std::size_t r) {
  const auto& req = inst.requesters[r];
  DelayBreakdown d;
  for (std::size_t c = 0; c < req.candidates.size(); ++c) {
    if (!sol.links[r][c]) continue;
    d.phase1_tran_s.push_back(sol.ratios[r][c] * req.file_packets *
                              inst.packet_bits / req.candidates[c].capacity_bps);
    d.phase1_prop_s.push_back(req.candidates[c].prop_delay_s);
  }
  if (sol.gs_ratio[r] > 0.0) {
    d.phase1_tran_s.push_back(sol.gs_ratio[r] * req.file_packets *
                              inst.packet_bits / req.g2s_capacity_bps);
    d.phase1_prop_s.push_back(req.g2s_prop_delay_s);
  }
  d.phase2_s = req.phase2_delay_s;
  d.finalize();
  return d;
}

DelayBreakdown case2_breakdown(const NonCachedInstance& inst,
                               const NonCachedSolution& sol, std::size_t r) {
  const auto& req = inst.case2[r];
  DelayBreakdown d;
  for (std::size_t p = 0; p < req.relays.size(); ++p) {
    if (!sol.assoc.links[r][p]) continue;
    const auto& relay = req.relays[p];
    const BandSlot& slot = inst.band_slots[relay.band_slot];
    const double rho = sol.assoc.ratios[r][p];
    d.phase1_tran_s.push_back(
        relay_delay(rho, sol.omega[relay.band_slot],
                    req.file_packets * inst.packet_bits,
                    relay.isl_capacity_bps, slot.c_const, slot.bandwidth_hz,
                    0.0));
    d.phase1_prop_s.push_back(relay.prop_delay_s);
  }
  d.phase2_s = req.phase2_delay_s;
  d.finalize();
  return d;
}

}  // namespace

SlotOutcome evaluate_slot(const SlotProblems& problems,
                          const std::string& cached_scheme,
                          const std::string& noncached_scheme,
                          std::uint64_t seed) {
  SlotOutcome outcome;
  outcome.direct_files = problems.direct;
  outcome.unservable = problems.unservable;

  NonCachedInstance noncached = problems.noncached;

  if (!problems.cached.requesters.empty()) {
    const CachedInstance& inst = problems.cached;
    AssociationSolution sol;
    if (cached_scheme == "epm") {
      sol = epm_associate(inst);
    } else if (cached_scheme == "exhaustive") {
      sol = exhaustive_cached(inst, 26);
    } else if (cached_scheme == "greedy") {
      sol = greedy_cached(inst);
    } else if (cached_scheme == "random") {
      RngStream rng(seed, {0xba5e11e5ull});
      sol = random_cached(inst, rng);
    } else {
      throw ConfigError("unknown cached scheme '" + cached_scheme + "'");
    }
    for (std::size_t r = 0; r < inst.requesters.size(); ++r) {
      if (!sol.servable[r]) {
        ++outcome.unservable;
        continue;
      }
      outcome.cached_files.push_back(cached_breakdown(inst, sol, r));
    }
    // Cached deliveries consume link terminals that the relay problem of the
    // same slot can no longer use.
    for (std::size_t r = 0; r < inst.requesters.size(); ++r)
      for (std::size_t c = 0; c < inst.requesters[r].candidates.size(); ++c)
        if (sol.links[r][c]) {
          noncached.degree_consumed[inst.requesters[r].sat_id] += 1;
          noncached.degree_consumed[inst.requesters[r].candidates[c].sat_id] += 1;
        }
  }

  for (std::size_t i = 0; i < noncached.case1.size(); ++i) {
    const auto& c1 = noncached.case1[i];
    DelayBreakdown d;
    d.phase1_tran_s.push_back(c1.file_packets * noncached.packet_bits /
                              c1.g2s_capacity_bps);
    d.phase1_prop_s.push_back(c1.g2s_prop_delay_s);
    d.phase2_s = c1.phase2_delay_s;
    d.finalize();
    outcome.noncached_files.push_back(d);
  }

  if (!noncached.case2.empty()) {
    NonCachedSolution sol;
    if (noncached_scheme == "ao") {
      sol = ao_solve(noncached);
    } else if (noncached_scheme == "equal_bandwidth") {
      sol = equal_bandwidth(noncached);
    } else if (noncached_scheme == "rounding") {
      sol = rounding_assoc(noncached);
    } else {
      throw ConfigError("unknown non-cached scheme '" + noncached_scheme + "'");
    }
    for (std::size_t r = 0; r < noncached.case2.size(); ++r) {
      if (!sol.assoc.servable[r]) {
        ++outcome.unservable;
        continue;
      }
      outcome.noncached_files.push_back(case2_breakdown(noncached, sol, r));
    }
  }
  return outcome;
}

namespace {

struct Accumulator {
  double total = 0.0;
  double phase1 = 0.0;
  double phase2 = 0.0;
  int files = 0;
  int unservable = 0;

  void add(const DelayBreakdown& d) {
    total += d.total_s;
    phase1 += d.phase1_s();
    phase2 += d.phase2_s;
    ++files;
  }
  ResultRow finish(const std::string& experiment, double sweep,
                   const std::string& scheme, int seed) const {
    ResultRow row{experiment, sweep, scheme, seed, 0.0, 0.0, 0.0, unservable};
    if (files > 0) {
      row.mean_delay_s = total / files;
      row.phase1_s = phase1 / files;
      row.phase2_s = phase2 / files;
    }
    return row;
  }
};

enum class TrafficFilter { All, CachedOnly, NonCachedOnly };

ScenarioSpec scenario_for(const ExperimentConfig& config, TrafficFilter filter,
                          int seed_index) {
  ScenarioSpec spec = config.scenario;
  spec.rng_seed = config.scenario.rng_seed + static_cast<std::uint64_t>(seed_index);
  if (filter == TrafficFilter::CachedOnly) {
    spec.file_mix.erase(FileType::Stream);
    if (spec.file_mix.empty())
      throw ConfigError("experiment: cached sweep needs cached file types");
  } else if (filter == TrafficFilter::NonCachedOnly) {
    FileTypeMix keep{10, 1000, 1.0};
    if (auto it = spec.file_mix.find(FileType::Stream);
        it != spec.file_mix.end())
      keep = it->second;
    spec.file_mix = {{FileType::Stream, keep}};
  }
  return spec;
}

// Runs `slots` slots of the scenario under one scheme pair and accumulates
// the delivered-file delays.
Accumulator run_slots(const ScenarioSpec& spec, int slots,
                      const std::string& cached_scheme,
                      const std::string& noncached_scheme) {
  Accumulator acc;
  const CachePlacement cache = place_cache(spec);
  for (int t = 0; t < slots; ++t) {
    NodePositions pos = propagate(spec, t);
    TimeSlotTopology topo = build_topology(pos, spec);
    topo.slot = t;
    topo.cache = cache;
    const auto requests = generate_requests(spec, t);
    SlotProblems problems = build_slot_problems(spec, topo, requests);
    SlotOutcome outcome = evaluate_slot(problems, cached_scheme,
                                        noncached_scheme, spec.rng_seed + t);
    for (const auto& d : outcome.cached_files) acc.add(d);
    for (const auto& d : outcome.noncached_files) acc.add(d);
    for (const auto& d : outcome.direct_files) acc.add(d);
    acc.unservable += outcome.unservable;
  }
  return acc;
}

std::vector<ResultRow> run_per_vs_snr(const ExperimentConfig& config) {
  std::vector<double> grid = config.sweep;
  if (grid.empty())
    for (double db = 0.0; db <= 24.0; db += 1.0) grid.push_back(db);
  const int n = static_cast<int>(config.scenario.packet_bits);
  const std::vector<PerModel> models = {ils_model(n), fhs_model(n),
                                        as_model(n), loo_model(n)};
  std::vector<ResultRow> rows;
  for (double db : grid)
    for (const PerModel& model : models) {
      ResultRow row;
      row.experiment = config.experiment;
      row.sweep = db;
      row.scheme = model.label;
      row.seed = 0;
      row.mean_delay_s = per_upper_bound(db_to_linear(db), model);
      rows.push_back(row);
    }
  return rows;
}

std::vector<ResultRow> run_convergence_trace(const ExperimentConfig& config) {
  const ScenarioSpec spec = scenario_for(config, TrafficFilter::All, 0);
  const CachePlacement cache = place_cache(spec);
  std::vector<ResultRow> rows;
  for (int t = 0; t < config.slots; ++t) {
    NodePositions pos = propagate(spec, t);
    TimeSlotTopology topo = build_topology(pos, spec);
    topo.cache = cache;
    const auto requests = generate_requests(spec, t);
    SlotProblems problems = build_slot_problems(spec, topo, requests);
    if (!problems.cached.requesters.empty()) {
      AssociationSolution sol = epm_associate(problems.cached);
      for (const auto& it : sol.trace)
        rows.push_back({config.experiment, static_cast<double>(it.iteration),
                        "epm-cached", t, it.objective_s, 0.0, 0.0, 0});
      if (!rows.empty()) break;
    }
  }
  for (int t = 0; t < config.slots; ++t) {
    NodePositions pos = propagate(spec, t);
    TimeSlotTopology topo = build_topology(pos, spec);
    topo.cache = cache;
    const auto requests = generate_requests(spec, t);
    SlotProblems problems = build_slot_problems(spec, topo, requests);
    if (!problems.noncached.case2.empty()) {
      NonCachedSolution sol = ao_solve(problems.noncached);
      for (const auto& it : sol.outer_trace)
        rows.push_back({config.experiment, static_cast<double>(it.iteration),
                        "ao-noncached", t, it.objective_s, 0.0, 0.0, 0});
      break;
    }
  }
  return rows;
}

struct Task {
  ScenarioSpec spec;
  int slots = 1;
  std::string cached_scheme = "epm";
  std::string noncached_scheme = "ao";
  std::string experiment;
  double sweep = 0.0;
  std::string label;
  int seed = 0;
};

std::vector<ResultRow> run_tasks(std::vector<Task> tasks) {
  std::vector<std::future<ResultRow>> futures;
  futures.reserve(tasks.size());
  for (Task& task : tasks)
    futures.push_back(std::async(std::launch::async, [task]() {
      Accumulator acc = run_slots(task.spec, task.slots, task.cached_scheme,
                                  task.noncached_scheme);
      return acc.finish(task.experiment, task.sweep, task.label, task.seed);
    }));
  std::vector<ResultRow> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());
  return rows;
}

}  // namespace

std::vector<ResultRow> run(const ExperimentConfig& config) {
  config.validate();
  if (config.experiment == "per-vs-snr") return run_per_vs_snr(config);
  if (config.experiment == "convergence-trace")
    return run_convergence_trace(config);

  std::vector<Task> tasks;
  auto push = [&](ScenarioSpec spec, double sweep, const std::string& label,
                  const std::string& cached, const std::string& noncached,
                  int seed) {
    Task task;
    task.spec = std::move(spec);
    task.slots = config.slots;
    task.cached_scheme = cached;
    task.noncached_scheme = noncached;
    task.experiment = config.experiment;
    task.sweep = sweep;
    task.label = label;
    task.seed = seed;
    tasks.push_back(std::move(task));
  };

  if (config.experiment == "delay-vs-requests-cached" ||
      config.experiment == "delay-vs-requests-noncached") {
    const bool cached_family =
        config.experiment == "delay-vs-requests-cached";
    const auto filter = cached_family ? TrafficFilter::CachedOnly
                                      : TrafficFilter::NonCachedOnly;
    std::vector<std::string> schemes = config.schemes;
    if (schemes.empty())
      schemes = cached_family
                    ? std::vector<std::string>{"epm", "greedy", "random"}
                    : std::vector<std::string>{"ao", "equal_bandwidth",
                                               "rounding"};
    for (const std::string& scheme : schemes) {
      const bool is_cached_scheme = kCachedSchemes.count(scheme) > 0;
      if (cached_family != is_cached_scheme)
        throw ConfigError("experiment: scheme '" + scheme +
                          "' does not match the traffic class");
    }
    for (double sweep : config.sweep)
      for (const std::string& scheme : schemes)
        for (int seed = 0; seed < config.seeds; ++seed) {
          ScenarioSpec spec = scenario_for(config, filter, seed);
          spec.request_probability =
              std::clamp(sweep / std::max(1, spec.num_aircraft), 0.0, 1.0);
          push(std::move(spec), sweep, scheme,
               cached_family ? scheme : "epm", cached_family ? "ao" : scheme,
               seed);
        }
  } else if (config.experiment == "delay-vs-max-isl") {
    for (double sweep : config.sweep)
      for (int seed = 0; seed < config.seeds; ++seed) {
        ScenarioSpec spec = scenario_for(config, TrafficFilter::All, seed);
        spec.max_isl = static_cast<int>(sweep);
        push(spec, sweep, "proposed", "epm", "ao", seed);
        // Reference that ignores the ISL cap entirely.
        ScenarioSpec full = std::move(spec);
        full.max_isl = full.num_satellites();
        push(std::move(full), sweep, "fully_connected", "epm", "ao", seed);
      }
  } else if (config.experiment == "delay-vs-gs-count") {
    for (double sweep : config.sweep)
      for (int seed = 0; seed < config.seeds; ++seed) {
        ScenarioSpec spec = scenario_for(config, TrafficFilter::All, seed);
        const int want = static_cast<int>(sweep);
        std::vector<GroundNode> nodes;
        int kept = 0;
        for (const auto& node : spec.ground_nodes) {
          if (node.role == GroundRole::GroundStation) {
            if (kept >= want) continue;
            ++kept;
          }
          nodes.push_back(node);
        }
        if (kept < want)
          throw ConfigError("experiment: scenario has fewer ground stations "
                            "than the sweep asks for");
        spec.ground_nodes = std::move(nodes);
        push(std::move(spec), sweep, "proposed", "epm", "ao", seed);
      }
  } else if (config.experiment == "delay-vs-bandwidth-altitude") {
    std::vector<double> altitudes = config.altitudes_m;
    if (altitudes.empty()) altitudes = {config.scenario.altitude_m};
    for (double sweep : config.sweep)
      for (double altitude : altitudes)
        for (int seed = 0; seed < config.seeds; ++seed) {
          ScenarioSpec spec = scenario_for(config, TrafficFilter::All, seed);
          spec.g2s_link.bandwidth_hz = sweep;
          spec.altitude_m = altitude;
          std::ostringstream label;
          label << "proposed@" << static_cast<long>(altitude / 1000.0) << "km";
          push(std::move(spec), sweep, label.str(), "epm", "ao", seed);
        }
  }
  return run_tasks(std::move(tasks));
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
  std::map<std::tuple<std::string, double, std::string>, std::vector<double>>
      groups;
  for (const auto& row : rows)
    groups[{row.experiment, row.sweep, row.scheme}].push_back(row.mean_delay_s);
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    s.experiment = std::get<0>(key);
    s.sweep = std::get<1>(key);
    s.scheme = std::get<2>(key);
    s.seeds = static_cast<int>(values.size());
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    s.mean_delay_s = mean;
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      s.stderr_s = std::sqrt(ss / (values.size() - 1)) /
                   std::sqrt(static_cast<double>(values.size()));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "experiment,sweep,scheme,seed,mean_delay_s,phase1_s,phase2_s,unservable\n";
  out.precision(12);
  for (const auto& row : rows)
    out << row.experiment << ',' << row.sweep << ',' << row.scheme << ','
        << row.seed << ',' << row.mean_delay_s << ',' << row.phase1_s << ','
        << row.phase2_s << ',' << row.unservable << '\n';
  return out.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << rows_to_csv(rows);
}

}  // namespace saginopt
