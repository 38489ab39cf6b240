// End-to-end demo pipelines behind `goh-atlas demo`.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "goh_atlas/io.hpp"

namespace goh_atlas::cli {

struct ScenarioOptions {
  std::optional<std::string> dir;  // artifact directory
  std::uint64_t seed = 1;
  std::optional<double> tol;       // overrides the scenario's own bounds when set
};

struct Check {
  std::string name;
  bool pass = false;
  io::json value;
  std::string bound;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<Check> checks;
  bool pass() const;
  io::json to_json() const;
};

const std::vector<std::string>& scenario_names();

/// Throws InvalidArgument for an unknown name.
ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options);

}  // namespace goh_atlas::cli
