#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "saginopt/geometry.hpp"
#include "saginopt/linkmodel.hpp"

namespace saginopt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FileType { Music, Image, Video, Stream };

constexpr bool type_is_cached(FileType t) { return t != FileType::Stream; }
const char* file_type_name(FileType t);
FileType file_type_from_name(const std::string& name);

struct FileTypeMix {
  int packets_lo = 1;
  int packets_hi = 1;
  double weight = 1.0;
};

struct RouteSpec {
  double start_lat_deg = 0.0;
  double start_lon_deg = 0.0;
  double end_lat_deg = 0.0;
  double end_lon_deg = 0.0;
  double speed_mps = 250.0;
  double altitude_m = 10000.0;
};

enum class GroundRole { Gateway, GroundStation };

struct GroundNode {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  GroundRole role = GroundRole::GroundStation;
};

enum class CachePolicy { UniformRandom, Zipf };

struct CacheConfig {
  CachePolicy policy = CachePolicy::UniformRandom;
  double hit_probability = 0.3;
  double zipf_exponent = 0.8;
};

/// The full physical-world description: constellation, aircraft routes,
/// ground segment, traffic mix, slotting and link budgets.
struct ScenarioSpec {
  int num_planes = 6;
  int sats_per_plane = 20;
  double altitude_m = 1000.0e3;
  double inclination_deg = 53.0;
  int phasing_factor = 1;  // Walker-delta inter-plane phase offset

  int num_aircraft = 10;
  std::vector<RouteSpec> aircraft_routes;
  std::vector<GroundNode> ground_nodes;

  double slot_duration_s = 15.0;
  int num_slots = 5760;
  int max_isl = 2;
  double snr_threshold_db = 7.0;

  std::map<FileType, FileTypeMix> file_mix;
  double request_probability = 0.5;
  CacheConfig cache;
  std::uint64_t rng_seed = 1;

  LinkParams isl_link;
  LinkParams g2s_link;
  LinkParams s2a_link;
  LinkParams g2a_link;

  int num_satellites() const { return num_planes * sats_per_plane; }
  double packet_bits = 1080.0;

  void validate() const;
};

// Table II defaults with 5 ground stations, 2 gateways and 10 transoceanic
// routes; the shipped JSON configs mirror this.
ScenarioSpec default_scenario();

struct FileRequest {
  int aircraft = 0;     // sn_f
  int slot = 0;         // gt_f
  FileType type = FileType::Music;
  int packets = 1;      // b_f
  double packet_bits = 1080.0;  // R_p

  bool cached() const { return type_is_cached(type); }
};

struct NodePositions {
  std::vector<Vec3> satellites;
  std::vector<Vec3> aircraft;
  std::vector<Vec3> ground;
};

using CachePlacement = std::vector<std::set<FileType>>;  // per satellite

/// Static picture of one slot: positions, nearest-distance associations among
/// visible pairs, the ISL neighbor sets and the cache placement.
struct TimeSlotTopology {
  struct Link {
    int id = -1;           // peer index; -1 when nothing is visible
    double distance_m = 0.0;
    double capacity_bps = 0.0;
  };

  int slot = 0;
  NodePositions positions;
  std::vector<Link> aircraft_sat;      // per aircraft: nearest visible satellite
  std::vector<Link> aircraft_gateway;  // per aircraft: nearest visible gateway
  std::vector<Link> sat_gs;            // per satellite: nearest visible GS
  std::vector<std::vector<Link>> sat_neighbors;  // per satellite: visible sats
  CachePlacement cache;
};

// Orbital mean motion and period of the constellation shell.
double orbital_period_s(double altitude_m);

// Positions of every node at slot t (circular Walker-delta orbits,
// great-circle aircraft shuttling, fixed ground nodes).
NodePositions propagate(const ScenarioSpec& spec, int slot);

// Nearest-distance associations restricted to pairs that are both in line of
// sight and above the SNR threshold.
TimeSlotTopology build_topology(const NodePositions& positions,
                                const ScenarioSpec& spec);

// At most one request per aircraft per slot; deterministic in (seed, slot).
std::vector<FileRequest> generate_requests(const ScenarioSpec& spec, int slot);

// Which cacheable file types each satellite holds; deterministic in the seed.
CachePlacement place_cache(const ScenarioSpec& spec);

}  // namespace saginopt
