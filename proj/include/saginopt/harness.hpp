#pragma once

#include <string>
#include <vector>

#include "saginopt/instances.hpp"
#include "saginopt/linkmodel.hpp"
#include "saginopt/scenario.hpp"

namespace saginopt {

/// One experiment family sweep: which quantity varies, which schemes run,
/// how many random seeds, and the scenario everything is derived from.
struct ExperimentConfig {
  std::string experiment;  // delay-vs-requests-cached, delay-vs-requests-noncached,
                           // delay-vs-max-isl, delay-vs-gs-count,
                           // delay-vs-bandwidth-altitude, per-vs-snr,
                           // convergence-trace
  std::vector<double> sweep;
  std::vector<std::string> schemes;
  int seeds = 1;
  int slots = 1;  // time slots simulated per seed
  std::vector<double> altitudes_m;  // delay-vs-bandwidth-altitude family
  ScenarioSpec scenario;

  void validate() const;
};

struct ResultRow {
  std::string experiment;
  double sweep = 0.0;
  std::string scheme;
  int seed = 0;
  double mean_delay_s = 0.0;
  double phase1_s = 0.0;
  double phase2_s = 0.0;
  int unservable = 0;
};

struct SummaryRow {
  std::string experiment;
  double sweep = 0.0;
  std::string scheme;
  double mean_delay_s = 0.0;
  double stderr_s = 0.0;
  int seeds = 0;
};

/// One slot's optimization problems plus the deliveries that bypass them
/// (gateway-direct files and files already cached on the serving satellite).
struct SlotProblems {
  CachedInstance cached;
  NonCachedInstance noncached;
  std::vector<DelayBreakdown> direct;
  int unservable = 0;
};

struct SlotOutcome {
  std::vector<DelayBreakdown> cached_files;
  std::vector<DelayBreakdown> noncached_files;
  std::vector<DelayBreakdown> direct_files;
  int unservable = 0;
};

// Classifies the slot's requests into solver instances per the delivery
// rules: gateway-direct, phase-2-only, cached aggregation, or the two
// non-cached cases.
SlotProblems build_slot_problems(const ScenarioSpec& spec,
                                 const TimeSlotTopology& topo,
                                 const std::vector<FileRequest>& requests);

// Runs the chosen schemes on one slot. Cached schemes: epm, exhaustive,
// greedy, random. Non-cached schemes: ao, equal_bandwidth, rounding.
SlotOutcome evaluate_slot(const SlotProblems& problems,
                          const std::string& cached_scheme,
                          const std::string& noncached_scheme,
                          std::uint64_t seed);

// Full experiment: one row per (sweep value, scheme, seed). Deterministic
// under a fixed config; sweep points and seeds evaluate in parallel.
std::vector<ResultRow> run(const ExperimentConfig& config);

std::vector<SummaryRow> aggregate(const std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace saginopt
