#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "auvplan/current_field.hpp"
#include "auvplan/mission.hpp"
#include "auvplan/ops_graph.hpp"

namespace auvplan {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BatchConfig {
  std::size_t trials = 25;
  std::uint64_t seed_stride = 1;
  bool fresh_world = false;
  std::size_t workers = 1;
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";  // csv | json
};

/// Everything one experiment needs, resolved to SI units.
struct ExperimentConfig {
  NetworkParams graph;
  std::optional<NodeId> start;
  std::optional<NodeId> target;
  FieldGenerationParams field;
  MissionConfig mission;
  BatchConfig batch;
  OutputConfig output;

  void validate() const;
};

/// Reads a speed given either as m/s or as a string with a "kt" suffix.
double parse_speed(const nlohmann::json& value);

/// Builds a config from a (possibly partial) JSON document; missing keys keep
/// their defaults, unknown sections or keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Applies PLANNER_<SECTION>_<KEY>=value overrides to a config document.
/// Values are parsed as JSON when possible and kept as strings otherwise.
void apply_env_overrides(nlohmann::json& doc, const std::vector<std::pair<std::string, std::string>>& env);

/// PLANNER_* variables from the process environment.
std::vector<std::pair<std::string, std::string>> planner_environment();

}  // namespace auvplan
