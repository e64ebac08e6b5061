#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "saginopt/config_io.hpp"
#include "saginopt/harness.hpp"

using namespace saginopt;

namespace {

ScenarioSpec desk_scenario() {
  ScenarioSpec spec = default_scenario();
  spec.num_planes = 4;
  spec.sats_per_plane = 6;
  spec.num_aircraft = 6;
  spec.num_slots = 100;
  spec.request_probability = 0.9;
  spec.cache.hit_probability = 0.4;
  spec.rng_seed = 3;
  return spec;
}

ExperimentConfig desk_config(const std::string& experiment,
                             std::vector<double> sweep) {
  ExperimentConfig config;
  config.experiment = experiment;
  config.sweep = std::move(sweep);
  config.seeds = 2;
  config.slots = 2;
  config.scenario = desk_scenario();
  return config;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  SUBCASE("round trip through json") {
    const ScenarioSpec spec = desk_scenario();
    const ScenarioSpec back = scenario_from_json(scenario_to_json(spec));
    CHECK(back.num_planes == spec.num_planes);
    CHECK(back.sats_per_plane == spec.sats_per_plane);
    CHECK(back.altitude_m == doctest::Approx(spec.altitude_m));
    CHECK(back.file_mix.at(FileType::Music).packets_lo ==
          spec.file_mix.at(FileType::Music).packets_lo);
    CHECK(back.isl_link.bandwidth_hz ==
          doctest::Approx(spec.isl_link.bandwidth_hz));
    CHECK(back.isl_link.tx_gain == doctest::Approx(spec.isl_link.tx_gain));
  }
  SUBCASE("malformed json is a config error") {
    CHECK_THROWS_AS(scenario_from_json("{ not json"), ConfigError);
  }
  SUBCASE("field-level messages name the offending field") {
    try {
      scenario_from_json(R"({"num_planes": "six"})");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("num_planes") != std::string::npos);
    }
  }
  SUBCASE("bad values are rejected") {
    CHECK_THROWS_AS(scenario_from_json(R"({"max_isl": 0})"), ConfigError);
    CHECK_THROWS_AS(scenario_from_json(R"({"request_probability": 2.0})"),
                    ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(R"({"file_mix": {"music": {"packets": [9, 2]}}})"),
        ConfigError);
    CHECK_THROWS_AS(
        scenario_from_json(R"({"cache": {"policy": "lru"}})"), ConfigError);
  }
  SUBCASE("experiment config validation") {
    CHECK_THROWS_AS(experiment_from_json(R"({"experiment": "nope"})"),
                    ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            R"({"experiment": "delay-vs-max-isl", "sweep": []})"),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            R"({"experiment": "delay-vs-max-isl", "sweep": [1], "seeds": 0})"),
        ConfigError);
    CHECK_THROWS_AS(
        experiment_from_json(
            R"({"experiment": "delay-vs-requests-cached", "sweep": [1],
                "schemes": ["warp"]})"),
        ConfigError);
  }
}

TEST_CASE("slot problems classify requests") {
  ScenarioSpec spec = desk_scenario();
  spec.request_probability = 1.0;
  const CachePlacement cache = place_cache(spec);
  const NodePositions pos = propagate(spec, 0);
  TimeSlotTopology topo = build_topology(pos, spec);
  topo.cache = cache;
  const auto requests = generate_requests(spec, 0);
  REQUIRE(!requests.empty());
  const SlotProblems problems = build_slot_problems(spec, topo, requests);

  int classified = static_cast<int>(problems.direct.size()) +
                   static_cast<int>(problems.cached.requesters.size()) +
                   static_cast<int>(problems.noncached.case1.size()) +
                   static_cast<int>(problems.noncached.case2.size()) +
                   problems.unservable;
  CHECK(classified == static_cast<int>(requests.size()));
  // every case-2 relay references a valid band slot
  for (const auto& req : problems.noncached.case2)
    for (const auto& relay : req.relays) {
      REQUIRE(relay.band_slot >= 0);
      REQUIRE(relay.band_slot <
              static_cast<int>(problems.noncached.band_slots.size()));
      CHECK(problems.noncached.band_slots[relay.band_slot].sat_id ==
            relay.sat_id);
    }
}

TEST_CASE("empty cache degenerates to ground-station delivery") {
  ScenarioSpec spec = desk_scenario();
  spec.request_probability = 1.0;
  spec.cache.hit_probability = 0.0;
  const CachePlacement cache = place_cache(spec);
  const NodePositions pos = propagate(spec, 0);
  TimeSlotTopology topo = build_topology(pos, spec);
  topo.cache = cache;
  const SlotProblems problems =
      build_slot_problems(spec, topo, generate_requests(spec, 0));
  // no satellite holds anything, so cached requests have no ISL candidates
  // and fall back to their ground-station side channel alone
  for (const auto& req : problems.cached.requesters) {
    CHECK(req.candidates.empty());
    CHECK(req.g2s_capacity_bps > 0.0);
  }
}

TEST_CASE("delay accounting identity") {
  ScenarioSpec spec = desk_scenario();
  spec.request_probability = 1.0;
  const CachePlacement cache = place_cache(spec);
  for (int t = 0; t < 3; ++t) {
    const NodePositions pos = propagate(spec, t);
    TimeSlotTopology topo = build_topology(pos, spec);
    topo.cache = cache;
    const SlotProblems problems =
        build_slot_problems(spec, topo, generate_requests(spec, t));
    const SlotOutcome outcome = evaluate_slot(problems, "epm", "ao", 7);
    auto check_identity = [](const DelayBreakdown& d) {
      CHECK(d.total_s ==
            doctest::Approx(d.phase1_s() + d.phase2_s).epsilon(1e-9));
    };
    for (const auto& d : outcome.cached_files) check_identity(d);
    for (const auto& d : outcome.noncached_files) check_identity(d);
    for (const auto& d : outcome.direct_files) check_identity(d);
  }
}

TEST_CASE("aggregate groups means and standard errors") {
  SUBCASE("single seed has zero stderr") {
    std::vector<ResultRow> rows = {
        {"delay-vs-max-isl", 1.0, "proposed", 0, 0.5, 0.4, 0.1, 0}};
    auto summary = aggregate(rows);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].mean_delay_s == doctest::Approx(0.5));
    CHECK(summary[0].stderr_s == 0.0);
    CHECK(summary[0].seeds == 1);
  }
  SUBCASE("constant rows reproduce the constant") {
    std::vector<ResultRow> rows;
    for (int seed = 0; seed < 4; ++seed)
      rows.push_back({"delay-vs-max-isl", 2.0, "proposed", seed, 0.7, 0.5, 0.2, 0});
    auto summary = aggregate(rows);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].mean_delay_s == doctest::Approx(0.7));
    CHECK(summary[0].stderr_s == doctest::Approx(0.0));
  }
  SUBCASE("hand-computed three-row group") {
    std::vector<ResultRow> rows = {
        {"delay-vs-gs-count", 3.0, "proposed", 0, 0.2, 0, 0, 0},
        {"delay-vs-gs-count", 3.0, "proposed", 1, 0.4, 0, 0, 0},
        {"delay-vs-gs-count", 3.0, "proposed", 2, 0.6, 0, 0, 0}};
    auto summary = aggregate(rows);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].mean_delay_s == doctest::Approx(0.4));
    // sample std 0.2, stderr 0.2 / sqrt(3)
    CHECK(summary[0].stderr_s == doctest::Approx(0.2 / std::sqrt(3.0)));
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
  }
}

TEST_CASE("experiment runs are deterministic") {
  ExperimentConfig config = desk_config("delay-vs-max-isl", {2.0});
  config.seeds = 2;
  const auto rows_a = run(config);
  const auto rows_b = run(config);
  CHECK(rows_to_csv(rows_a) == rows_to_csv(rows_b));
  REQUIRE(!rows_a.empty());
  // proposed and fully-connected rows for each seed
  CHECK(rows_a.size() == 4);
}

TEST_CASE("csv schema") {
  std::vector<ResultRow> rows = {
      {"delay-vs-max-isl", 1.0, "proposed", 0, 0.5, 0.4, 0.1, 2}};
  const std::string csv = rows_to_csv(rows);
  CHECK(csv.rfind("experiment,sweep,scheme,seed,mean_delay_s,phase1_s,"
                  "phase2_s,unservable\n",
                  0) == 0);
  CHECK(csv.find("delay-vs-max-isl,1,proposed,0,0.5,0.4,0.1,2") !=
        std::string::npos);
}

TEST_CASE("per-vs-snr family emits monotone bounds") {
  ExperimentConfig config;
  config.experiment = "per-vs-snr";
  config.sweep = {4.0, 8.0, 12.0, 16.0, 20.0};
  config.scenario = desk_scenario();
  config.scenario.packet_bits = 1023;
  const auto rows = run(config);
  CHECK(rows.size() == config.sweep.size() * 4);
  std::map<std::string, double> prev;
  for (const auto& row : rows) {
    if (prev.count(row.scheme))
      CHECK(row.mean_delay_s <= prev[row.scheme] + 1e-12);
    prev[row.scheme] = row.mean_delay_s;
  }
}

TEST_CASE("convergence trace family") {
  ExperimentConfig config;
  config.experiment = "convergence-trace";
  config.slots = 20;
  config.scenario = desk_scenario();
  config.scenario.request_probability = 1.0;
  const auto rows = run(config);
  REQUIRE(!rows.empty());
  bool saw_cached = false, saw_noncached = false;
  double prev_obj = 1e300;
  for (const auto& row : rows) {
    if (row.scheme == "epm-cached") saw_cached = true;
    if (row.scheme == "ao-noncached") {
      saw_noncached = true;
      CHECK(row.mean_delay_s <= prev_obj + 1e-9);
      prev_obj = row.mean_delay_s;
    }
  }
  CHECK(saw_cached);
  CHECK(saw_noncached);
}
