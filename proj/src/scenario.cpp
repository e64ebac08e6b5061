#include "saginopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "saginopt/rng.hpp"

namespace saginopt {

const char* file_type_name(FileType t) {
  switch (t) {
    case FileType::Music: return "music";
    case FileType::Image: return "image";
    case FileType::Video: return "video";
    case FileType::Stream: return "stream";
  }
  return "unknown";
}

FileType file_type_from_name(const std::string& name) {
  if (name == "music") return FileType::Music;
  if (name == "image") return FileType::Image;
  if (name == "video") return FileType::Video;
  if (name == "stream") return FileType::Stream;
  throw ConfigError("unknown file type '" + name + "'");
}

void ScenarioSpec::validate() const {
  if (num_planes <= 0 || sats_per_plane <= 0)
    throw ConfigError("scenario: num_planes and sats_per_plane must be > 0");
  if (altitude_m <= 0.0) throw ConfigError("scenario: altitude_m must be > 0");
  if (slot_duration_s <= 0.0)
    throw ConfigError("scenario: slot_duration_s must be > 0");
  if (num_slots <= 0) throw ConfigError("scenario: num_slots must be > 0");
  if (max_isl < 1) throw ConfigError("scenario: max_isl must be >= 1");
  if (request_probability < 0.0 || request_probability > 1.0)
    throw ConfigError("scenario: request_probability must lie in [0, 1]");
  if (cache.hit_probability < 0.0 || cache.hit_probability > 1.0)
    throw ConfigError("scenario: cache.hit_probability must lie in [0, 1]");
  if (cache.zipf_exponent < 0.0)
    throw ConfigError("scenario: cache.zipf_exponent must be >= 0");
  if (num_aircraft < 0) throw ConfigError("scenario: num_aircraft must be >= 0");
  if (num_aircraft > 0 && aircraft_routes.empty())
    throw ConfigError("scenario: aircraft_routes required when aircraft exist");
  for (const auto& r : aircraft_routes)
    if (r.speed_mps <= 0.0 || r.altitude_m < 0.0)
      throw ConfigError("scenario: route speed must be > 0 and altitude >= 0");
  if (packet_bits < 1.0) throw ConfigError("scenario: packet_bits must be >= 1");
  if (file_mix.empty()) throw ConfigError("scenario: file_mix must be nonempty");
  double total_weight = 0.0;
  for (const auto& [type, mix] : file_mix) {
    if (mix.packets_lo < 1 || mix.packets_hi < mix.packets_lo)
      throw ConfigError(std::string("scenario: bad packet range for ") +
                        file_type_name(type));
    if (mix.weight < 0.0)
      throw ConfigError("scenario: file mix weights must be >= 0");
    total_weight += mix.weight;
  }
  if (total_weight <= 0.0)
    throw ConfigError("scenario: file mix weights sum to zero");
  try {
    isl_link.validate();
    g2s_link.validate();
    s2a_link.validate();
    g2a_link.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

ScenarioSpec default_scenario() {
  ScenarioSpec spec;
  spec.isl_link = {5.0, db_to_linear(90.0), db_to_linear(90.0),
                   db_to_linear(-5.2), 193.0e12, 50.0e6, 3.98e-21, 1.0};
  spec.g2s_link = {10.0, db_to_linear(52.0), db_to_linear(40.0),
                   db_to_linear(-5.2), 30.0e9, 100.0e6, 3.98e-21, 1.0};
  spec.s2a_link = {5.0, db_to_linear(40.0), db_to_linear(30.0),
                   db_to_linear(-2.5), 15.0e9, 100.0e6, 3.98e-21, 1.0};
  spec.g2a_link = {10.0, db_to_linear(52.0), db_to_linear(30.0),
                   db_to_linear(-2.5), 18.0e9, 100.0e6, 3.98e-21, 1.0};
  spec.file_mix = {
      {FileType::Music, {50, 100, 0.25}},
      {FileType::Image, {500, 1000, 0.25}},
      {FileType::Video, {1000, 3000, 0.25}},
      {FileType::Stream, {10, 1000, 0.25}},
  };
  spec.ground_nodes = {
      {40.0, -105.0, GroundRole::GroundStation},
      {48.9, 2.3, GroundRole::GroundStation},
      {35.7, 139.7, GroundRole::GroundStation},
      {-33.9, 151.2, GroundRole::GroundStation},
      {-23.5, -46.6, GroundRole::GroundStation},
      {51.5, -0.1, GroundRole::Gateway},
      {37.6, -122.4, GroundRole::Gateway},
  };
  spec.aircraft_routes = {
      {40.6, -73.8, 51.5, -0.5, 250.0, 10000.0},
      {33.9, -118.4, 35.8, 140.4, 250.0, 10000.0},
      {-33.9, 151.2, 33.9, -118.4, 250.0, 10000.0},
      {-23.4, -46.5, 40.6, -73.8, 250.0, 10000.0},
      {25.3, 55.4, 40.6, -73.8, 250.0, 10000.0},
      {1.4, 104.0, 51.5, -0.5, 250.0, 10000.0},
      {35.6, 139.8, 37.6, -122.4, 250.0, 10000.0},
      {49.0, 2.5, -23.4, -46.5, 250.0, 10000.0},
      {-26.1, 28.2, 51.5, -0.5, 250.0, 10000.0},
      {-33.4, -70.8, -33.9, 151.2, 250.0, 10000.0},
  };
  return spec;
}

double orbital_period_s(double altitude_m) {
  const double a = kEarthRadius + altitude_m;
  return 2.0 * kPi * std::sqrt(a * a * a / kEarthMu);
}

namespace {

Vec3 orbit_position(double radius, double raan, double inclination,
                    double anomaly) {
  const double cr = std::cos(raan);
  const double sr = std::sin(raan);
  const double ci = std::cos(inclination);
  const double si = std::sin(inclination);
  const double ca = std::cos(anomaly);
  const double sa = std::sin(anomaly);
  return {radius * (cr * ca - sr * sa * ci), radius * (sr * ca + cr * sa * ci),
          radius * sa * si};
}

// Spherical interpolation between two surface directions.
Vec3 slerp_direction(const Vec3& a, const Vec3& b, double u) {
  const double cosang = std::clamp(dot(a, b), -1.0, 1.0);
  const double ang = std::acos(cosang);
  if (ang < 1e-12) return a;
  const double s = std::sin(ang);
  return a * (std::sin((1.0 - u) * ang) / s) + b * (std::sin(u * ang) / s);
}

}  // namespace

NodePositions propagate(const ScenarioSpec& spec, int slot) {
  if (slot < 0 || slot >= spec.num_slots)
    throw std::invalid_argument("propagate: slot index out of range");
  const double t = slot * spec.slot_duration_s;
  NodePositions pos;

  const double radius = kEarthRadius + spec.altitude_m;
  const double mean_motion =
      std::sqrt(kEarthMu / (radius * radius * radius));
  const double incl = deg_to_rad(spec.inclination_deg);
  const int planes = spec.num_planes;
  const int per_plane = spec.sats_per_plane;
  pos.satellites.reserve(planes * per_plane);
  for (int p = 0; p < planes; ++p) {
    const double raan = 2.0 * kPi * p / planes;
    for (int s = 0; s < per_plane; ++s) {
      const double anomaly =
          2.0 * kPi * s / per_plane +
          2.0 * kPi * spec.phasing_factor * p / (planes * per_plane) +
          mean_motion * t;
      pos.satellites.push_back(orbit_position(radius, raan, incl, anomaly));
    }
  }

  pos.aircraft.reserve(spec.num_aircraft);
  const int n_routes = static_cast<int>(spec.aircraft_routes.size());
  for (int a = 0; a < spec.num_aircraft; ++a) {
    const RouteSpec& route = spec.aircraft_routes[a % n_routes];
    const Vec3 p0 = normalized(from_lat_lon(route.start_lat_deg, route.start_lon_deg));
    const Vec3 p1 = normalized(from_lat_lon(route.end_lat_deg, route.end_lon_deg));
    const double flight_radius = kEarthRadius + route.altitude_m;
    const double span = std::acos(std::clamp(dot(p0, p1), -1.0, 1.0));
    double u = 0.0;
    if (span > 1e-12) {
      // Aircraft sharing a route start evenly spread and shuttle end-to-end.
      const int copies = (spec.num_aircraft + n_routes - 1) / n_routes;
      const double offset = (a / n_routes) / static_cast<double>(copies);
      const double travelled = route.speed_mps * t / (flight_radius * span);
      double phase = std::fmod(offset + travelled, 2.0);
      u = phase <= 1.0 ? phase : 2.0 - phase;
    }
    pos.aircraft.push_back(slerp_direction(p0, p1, u) * flight_radius);
  }

  pos.ground.reserve(spec.ground_nodes.size());
  for (const auto& node : spec.ground_nodes)
    pos.ground.push_back(from_lat_lon(node.lat_deg, node.lon_deg));
  return pos;
}

namespace {

bool pair_visible(const Vec3& a, const Vec3& b, const LinkParams& params,
                  double snr_threshold, double* snr_out) {
  if (!line_of_sight(a, b)) return false;
  const double d = distance(a, b);
  if (d <= 0.0) return false;
  const double snr = link_snr(params, d);
  if (snr_out) *snr_out = snr;
  return snr >= snr_threshold;
}

}  // namespace

TimeSlotTopology build_topology(const NodePositions& positions,
                                const ScenarioSpec& spec) {
  TimeSlotTopology topo;
  topo.positions = positions;
  const double threshold = db_to_linear(spec.snr_threshold_db);
  const int n_sat = static_cast<int>(positions.satellites.size());
  const int n_air = static_cast<int>(positions.aircraft.size());
  const int n_ground = static_cast<int>(positions.ground.size());

  topo.aircraft_sat.resize(n_air);
  topo.aircraft_gateway.resize(n_air);
  for (int a = 0; a < n_air; ++a) {
    const Vec3& ap = positions.aircraft[a];
    TimeSlotTopology::Link best_sat;
    for (int s = 0; s < n_sat; ++s) {
      double snr = 0.0;
      if (!pair_visible(positions.satellites[s], ap, spec.s2a_link, threshold,
                        &snr))
        continue;
      const double d = distance(positions.satellites[s], ap);
      if (best_sat.id < 0 || d < best_sat.distance_m)
        best_sat = {s, d, shannon_rate(spec.s2a_link.bandwidth_hz, snr)};
    }
    topo.aircraft_sat[a] = best_sat;

    TimeSlotTopology::Link best_gw;
    for (int g = 0; g < n_ground; ++g) {
      if (spec.ground_nodes[g].role != GroundRole::Gateway) continue;
      double snr = 0.0;
      if (!pair_visible(positions.ground[g], ap, spec.g2a_link, threshold,
                        &snr))
        continue;
      const double d = distance(positions.ground[g], ap);
      if (best_gw.id < 0 || d < best_gw.distance_m)
        best_gw = {g, d, shannon_rate(spec.g2a_link.bandwidth_hz, snr)};
    }
    topo.aircraft_gateway[a] = best_gw;
  }

  topo.sat_gs.resize(n_sat);
  topo.sat_neighbors.resize(n_sat);
  for (int s = 0; s < n_sat; ++s) {
    const Vec3& sp = positions.satellites[s];
    TimeSlotTopology::Link best_gs;
    for (int g = 0; g < n_ground; ++g) {
      if (spec.ground_nodes[g].role != GroundRole::GroundStation) continue;
      if (!pair_visible(positions.ground[g], sp, spec.g2s_link, threshold,
                        nullptr))
        continue;
      const double d = distance(positions.ground[g], sp);
      if (best_gs.id < 0 || d < best_gs.distance_m) {
        const double c = g2s_c_const(spec.g2s_link, d);
        best_gs = {g, d, g2s_rate(1.0, c, spec.g2s_link.bandwidth_hz)};
      }
    }
    topo.sat_gs[s] = best_gs;

    for (int k = 0; k < n_sat; ++k) {
      if (k == s) continue;
      double snr = 0.0;
      if (!pair_visible(sp, positions.satellites[k], spec.isl_link, threshold,
                        &snr))
        continue;
      const double d = distance(sp, positions.satellites[k]);
      topo.sat_neighbors[s].push_back(
          {k, d, shannon_rate(spec.isl_link.bandwidth_hz, snr)});
    }
  }
  return topo;
}

std::vector<FileRequest> generate_requests(const ScenarioSpec& spec, int slot) {
  if (slot < 0 || slot >= spec.num_slots)
    throw std::invalid_argument("generate_requests: slot index out of range");
  std::vector<FileRequest> requests;
  double total_weight = 0.0;
  for (const auto& [type, mix] : spec.file_mix) total_weight += mix.weight;
  for (int a = 0; a < spec.num_aircraft; ++a) {
    RngStream rng(spec.rng_seed, {0x7e90e575u, static_cast<std::uint64_t>(slot),
                                  static_cast<std::uint64_t>(a)});
    if (rng.next_double() >= spec.request_probability) continue;
    double pick = rng.next_double() * total_weight;
    FileType chosen = spec.file_mix.begin()->first;
    for (const auto& [type, mix] : spec.file_mix) {
      chosen = type;
      pick -= mix.weight;
      if (pick < 0.0) break;
    }
    const FileTypeMix& mix = spec.file_mix.at(chosen);
    FileRequest req;
    req.aircraft = a;
    req.slot = slot;
    req.type = chosen;
    req.packets = static_cast<int>(rng.next_int(mix.packets_lo, mix.packets_hi));
    req.packet_bits = spec.packet_bits;
    requests.push_back(req);
  }
  return requests;
}

CachePlacement place_cache(const ScenarioSpec& spec) {
  CachePlacement placement(spec.num_satellites());
  const FileType cacheable[] = {FileType::Music, FileType::Image,
                                FileType::Video};
  for (int s = 0; s < spec.num_satellites(); ++s) {
    RngStream rng(spec.rng_seed, {0xcac4e11au, static_cast<std::uint64_t>(s)});
    int rank = 1;
    for (FileType type : cacheable) {
      double p = spec.cache.hit_probability;
      if (spec.cache.policy == CachePolicy::Zipf)
        p = std::min(1.0, p * std::pow(static_cast<double>(rank),
                                       -spec.cache.zipf_exponent));
      if (rng.next_double() < p) placement[s].insert(type);
      ++rank;
    }
  }
  return placement;
}

}  // namespace saginopt
