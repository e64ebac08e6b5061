#pragma once

#include <string>

#include "saginopt/harness.hpp"
#include "saginopt/scenario.hpp"

namespace saginopt {

// Parsers for the JSON configuration documents. Unknown values and type
// mismatches raise ConfigError with the offending field named. Every field
// is optional; omitted ones keep the Table-II defaults.
ScenarioSpec scenario_from_json(const std::string& text);
ScenarioSpec scenario_from_file(const std::string& path);

ExperimentConfig experiment_from_json(const std::string& text);
ExperimentConfig experiment_from_file(const std::string& path);

std::string scenario_to_json(const ScenarioSpec& spec);

}  // namespace saginopt
