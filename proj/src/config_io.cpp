#include "saginopt/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace saginopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

double get_number(const json& j, const std::string& field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number()) fail(field, "expected a number");
  return j.at(field).get<double>();
}

int get_int(const json& j, const std::string& field, int fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number_integer()) fail(field, "expected an integer");
  return j.at(field).get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& field,
                      std::uint64_t fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number_unsigned() && !j.at(field).is_number_integer())
    fail(field, "expected an integer");
  return j.at(field).get<std::uint64_t>();
}

LinkParams parse_link(const json& j, const std::string& prefix,
                      const LinkParams& fallback) {
  LinkParams p = fallback;
  p.tx_power_w = get_number(j, "tx_power_w", p.tx_power_w);
  if (j.contains("tx_gain_db"))
    p.tx_gain = db_to_linear(get_number(j, "tx_gain_db", 0.0));
  if (j.contains("rx_gain_db"))
    p.rx_gain = db_to_linear(get_number(j, "rx_gain_db", 0.0));
  if (j.contains("add_loss_db"))
    p.add_loss = db_to_linear(-std::abs(get_number(j, "add_loss_db", 0.0)));
  p.frequency_hz = get_number(j, "frequency_hz", p.frequency_hz);
  p.bandwidth_hz = get_number(j, "bandwidth_hz", p.bandwidth_hz);
  p.noise_psd = get_number(j, "noise_psd_w_per_hz", p.noise_psd);
  p.fading_gain = get_number(j, "fading_gain", p.fading_gain);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(prefix, e.what());
  }
  return p;
}

ScenarioSpec parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  ScenarioSpec spec = default_scenario();
  spec.num_planes = get_int(j, "num_planes", spec.num_planes);
  spec.sats_per_plane = get_int(j, "sats_per_plane", spec.sats_per_plane);
  spec.altitude_m = get_number(j, "altitude_m", spec.altitude_m);
  spec.inclination_deg = get_number(j, "inclination_deg", spec.inclination_deg);
  spec.phasing_factor = get_int(j, "phasing_factor", spec.phasing_factor);
  spec.num_aircraft = get_int(j, "num_aircraft", spec.num_aircraft);
  spec.slot_duration_s = get_number(j, "slot_duration_s", spec.slot_duration_s);
  spec.num_slots = get_int(j, "num_slots", spec.num_slots);
  spec.max_isl = get_int(j, "max_isl", spec.max_isl);
  spec.snr_threshold_db = get_number(j, "snr_threshold_db", spec.snr_threshold_db);
  spec.request_probability =
      get_number(j, "request_probability", spec.request_probability);
  spec.rng_seed = get_u64(j, "rng_seed", spec.rng_seed);
  spec.packet_bits = get_number(j, "packet_bits", spec.packet_bits);

  if (j.contains("aircraft_routes")) {
    if (!j.at("aircraft_routes").is_array())
      fail("aircraft_routes", "expected an array");
    spec.aircraft_routes.clear();
    for (const auto& r : j.at("aircraft_routes")) {
      RouteSpec route;
      route.start_lat_deg = get_number(r, "start_lat_deg", 0.0);
      route.start_lon_deg = get_number(r, "start_lon_deg", 0.0);
      route.end_lat_deg = get_number(r, "end_lat_deg", 0.0);
      route.end_lon_deg = get_number(r, "end_lon_deg", 0.0);
      route.speed_mps = get_number(r, "speed_mps", 250.0);
      route.altitude_m = get_number(r, "altitude_m", 10000.0);
      spec.aircraft_routes.push_back(route);
    }
  }

  if (j.contains("ground_nodes")) {
    if (!j.at("ground_nodes").is_array())
      fail("ground_nodes", "expected an array");
    spec.ground_nodes.clear();
    for (const auto& g : j.at("ground_nodes")) {
      GroundNode node;
      node.lat_deg = get_number(g, "lat_deg", 0.0);
      node.lon_deg = get_number(g, "lon_deg", 0.0);
      const std::string role = g.value("role", "gs");
      if (role == "gs")
        node.role = GroundRole::GroundStation;
      else if (role == "gateway")
        node.role = GroundRole::Gateway;
      else
        fail("ground_nodes.role", "expected 'gs' or 'gateway'");
      spec.ground_nodes.push_back(node);
    }
  }

  if (j.contains("file_mix")) {
    if (!j.at("file_mix").is_object()) fail("file_mix", "expected an object");
    spec.file_mix.clear();
    for (const auto& [name, body] : j.at("file_mix").items()) {
      const FileType type = file_type_from_name(name);
      FileTypeMix mix;
      if (body.contains("packets")) {
        const auto& range = body.at("packets");
        if (!range.is_array() || range.size() != 2)
          fail("file_mix." + name + ".packets", "expected [lo, hi]");
        mix.packets_lo = range[0].get<int>();
        mix.packets_hi = range[1].get<int>();
      }
      mix.weight = get_number(body, "weight", 1.0);
      spec.file_mix[type] = mix;
    }
  }

  if (j.contains("cache")) {
    const auto& c = j.at("cache");
    const std::string policy = c.value("policy", "uniform");
    if (policy == "uniform")
      spec.cache.policy = CachePolicy::UniformRandom;
    else if (policy == "zipf")
      spec.cache.policy = CachePolicy::Zipf;
    else
      fail("cache.policy", "expected 'uniform' or 'zipf'");
    spec.cache.hit_probability =
        get_number(c, "hit_probability", spec.cache.hit_probability);
    spec.cache.zipf_exponent =
        get_number(c, "zipf_exponent", spec.cache.zipf_exponent);
  }

  if (j.contains("links")) {
    const auto& links = j.at("links");
    if (links.contains("isl"))
      spec.isl_link = parse_link(links.at("isl"), "links.isl", spec.isl_link);
    if (links.contains("g2s"))
      spec.g2s_link = parse_link(links.at("g2s"), "links.g2s", spec.g2s_link);
    if (links.contains("s2a"))
      spec.s2a_link = parse_link(links.at("s2a"), "links.s2a", spec.s2a_link);
    if (links.contains("g2a"))
      spec.g2a_link = parse_link(links.at("g2a"), "links.g2a", spec.g2a_link);
  }

  spec.validate();
  return spec;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: malformed JSON");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

ScenarioSpec scenario_from_json(const std::string& text) {
  return parse_scenario(parse_text(text));
}

ScenarioSpec scenario_from_file(const std::string& path) {
  return scenario_from_json(slurp(path));
}

ExperimentConfig experiment_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ConfigError("experiment: expected a JSON object");
  ExperimentConfig config;
  if (!j.contains("experiment") || !j.at("experiment").is_string())
    fail("experiment", "required string");
  config.experiment = j.at("experiment").get<std::string>();
  if (j.contains("sweep")) {
    if (!j.at("sweep").is_array()) fail("sweep", "expected an array of numbers");
    for (const auto& v : j.at("sweep")) {
      if (!v.is_number()) fail("sweep", "expected an array of numbers");
      config.sweep.push_back(v.get<double>());
    }
  }
  if (j.contains("schemes")) {
    if (!j.at("schemes").is_array()) fail("schemes", "expected an array");
    for (const auto& v : j.at("schemes"))
      config.schemes.push_back(v.get<std::string>());
  }
  config.seeds = get_int(j, "seeds", config.seeds);
  config.slots = get_int(j, "slots", config.slots);
  if (j.contains("altitudes_m"))
    for (const auto& v : j.at("altitudes_m"))
      config.altitudes_m.push_back(v.get<double>());
  if (j.contains("scenario_file"))
    config.scenario = scenario_from_file(j.at("scenario_file").get<std::string>());
  else if (j.contains("scenario"))
    config.scenario = parse_scenario(j.at("scenario"));
  else
    config.scenario = default_scenario();
  config.validate();
  return config;
}

ExperimentConfig experiment_from_file(const std::string& path) {
  return experiment_from_json(slurp(path));
}

std::string scenario_to_json(const ScenarioSpec& spec) {
  json j;
  j["num_planes"] = spec.num_planes;
  j["sats_per_plane"] = spec.sats_per_plane;
  j["altitude_m"] = spec.altitude_m;
  j["inclination_deg"] = spec.inclination_deg;
  j["phasing_factor"] = spec.phasing_factor;
  j["num_aircraft"] = spec.num_aircraft;
  j["slot_duration_s"] = spec.slot_duration_s;
  j["num_slots"] = spec.num_slots;
  j["max_isl"] = spec.max_isl;
  j["snr_threshold_db"] = spec.snr_threshold_db;
  j["request_probability"] = spec.request_probability;
  j["rng_seed"] = spec.rng_seed;
  j["packet_bits"] = spec.packet_bits;
  for (const auto& r : spec.aircraft_routes)
    j["aircraft_routes"].push_back({{"start_lat_deg", r.start_lat_deg},
                                    {"start_lon_deg", r.start_lon_deg},
                                    {"end_lat_deg", r.end_lat_deg},
                                    {"end_lon_deg", r.end_lon_deg},
                                    {"speed_mps", r.speed_mps},
                                    {"altitude_m", r.altitude_m}});
  for (const auto& g : spec.ground_nodes)
    j["ground_nodes"].push_back(
        {{"lat_deg", g.lat_deg},
         {"lon_deg", g.lon_deg},
         {"role", g.role == GroundRole::Gateway ? "gateway" : "gs"}});
  for (const auto& [type, mix] : spec.file_mix)
    j["file_mix"][file_type_name(type)] = {
        {"packets", {mix.packets_lo, mix.packets_hi}}, {"weight", mix.weight}};
  j["cache"] = {
      {"policy", spec.cache.policy == CachePolicy::Zipf ? "zipf" : "uniform"},
      {"hit_probability", spec.cache.hit_probability},
      {"zipf_exponent", spec.cache.zipf_exponent}};
  auto link_json = [](const LinkParams& p) {
    return json{{"tx_power_w", p.tx_power_w},
                {"tx_gain_db", linear_to_db(p.tx_gain)},
                {"rx_gain_db", linear_to_db(p.rx_gain)},
                {"add_loss_db", -linear_to_db(p.add_loss)},
                {"frequency_hz", p.frequency_hz},
                {"bandwidth_hz", p.bandwidth_hz},
                {"noise_psd_w_per_hz", p.noise_psd},
                {"fading_gain", p.fading_gain}};
  };
  j["links"] = {{"isl", link_json(spec.isl_link)},
                {"g2s", link_json(spec.g2s_link)},
                {"s2a", link_json(spec.s2a_link)},
                {"g2a", link_json(spec.g2a_link)}};
  return j.dump(2);
}

}  // namespace saginopt
