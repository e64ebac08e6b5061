#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace saginopt {

/// One candidate feeder link of a requesting satellite.
struct CandidateLink {
  int sat_id = -1;
  double capacity_bps = 0.0;
  double prop_delay_s = 0.0;
};

/// A satellite aggregating one cached file, with the neighbors that hold the
/// file and the optional G2S side channel.
struct CachedRequester {
  int sat_id = -1;
  double file_packets = 1.0;        // b_f
  std::vector<CandidateLink> candidates;
  double g2s_capacity_bps = 0.0;    // 0 when no ground station is visible
  double g2s_prop_delay_s = 0.0;
  double phase2_delay_s = 0.0;      // S2A leg, accounted outside the solver
};

/// One cached-delivery optimization problem: every requesting satellite of a
/// slot plus the shared per-satellite link budget.
struct CachedInstance {
  std::vector<CachedRequester> requesters;
  double packet_bits = 1080.0;      // R_p
  int max_isl = 2;
  // Link terminals already consumed by other traffic, per satellite id.
  std::unordered_map<int, int> degree_consumed;

  void validate() const;
};

struct EpmIterate {
  int iteration = 0;
  double objective_s = 0.0;  // continuous objective F at the iterate
  double residual = 0.0;     // K - <pi, v>
  double epsilon = 0.0;
};

/// Association + download ratios for one instance. Entries are aligned with
/// the instance's requester/candidate ordering.
struct AssociationSolution {
  std::vector<std::vector<std::uint8_t>> links;  // X, one row per requester
  std::vector<std::vector<double>> ratios;       // rho over candidates
  std::vector<double> gs_ratio;                  // rho of the G2S share
  std::vector<double> phase1_delay_s;            // equalized transmission delay
  // A requester stranded by exhausted link budgets keeps servable = 0 and is
  // excluded from the objective.
  std::vector<std::uint8_t> servable;
  double objective_s = 0.0;                      // sum of phase-1 delays
  std::vector<EpmIterate> trace;
  bool iteration_cap_hit = false;
};

/// One two-hop relay option of a non-cached requester: the ISL into the
/// requester plus the relay's ground-station feeder.
struct RelayOption {
  int sat_id = -1;
  double isl_capacity_bps = 0.0;
  int band_slot = -1;        // index into NonCachedInstance::band_slots
  double prop_delay_s = 0.0; // ground -> relay -> requester
};

struct NonCachedRequester {
  int sat_id = -1;
  double file_packets = 1.0;
  std::vector<RelayOption> relays;
  double phase2_delay_s = 0.0;
};

/// A (ground station, relay satellite) pair contending for the station band.
struct BandSlot {
  int gs_id = -1;
  int sat_id = -1;
  double c_const = 0.0;       // SNR budget constant of the feeder link
  double bandwidth_hz = 1.0;  // W_G2S
};

struct Case1Requester {
  int sat_id = -1;
  double file_packets = 1.0;
  double g2s_capacity_bps = 0.0;
  double g2s_prop_delay_s = 0.0;
  double phase2_delay_s = 0.0;
};

struct NonCachedInstance {
  std::vector<NonCachedRequester> case2;
  std::vector<Case1Requester> case1;
  std::vector<BandSlot> band_slots;
  double packet_bits = 1080.0;
  int max_isl = 2;
  std::unordered_map<int, int> degree_consumed;
  double omega_floor = 1e-6;

  void validate() const;
};

struct AoIterate {
  int iteration = 0;
  double objective_s = 0.0;
};

struct NonCachedSolution {
  AssociationSolution assoc;        // X-tilde / rho-tilde over relay options
  std::vector<double> omega;        // per band slot
  std::vector<AoIterate> outer_trace;
  double objective_s = 0.0;
};

}  // namespace saginopt
