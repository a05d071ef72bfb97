#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cssr/ground_state.hpp"
#include "cssr/spectral_core.hpp"

namespace cssr {

struct SimulationConfig {
  GridSpec grid;
  double beta = 1.0;
  double epsilon = 0.25;
  FlowConfig flow;
  double dt = 2.5e-4;
  double t_final = 0.5;
  double snapshot_stride = 0.01;
  std::vector<double> epsilons{0.4, 0.2, 0.1, 0.05};
  double initial_center = 1.0;  // center of the Gaussian datum used by evolve and sweep-dyn
  std::string output_dir = "cssr_out";
  bool write_fields = false;
  unsigned threads = 0;  // 0: hardware concurrency

  // Throws ConfigError naming the offending key.
  void validate() const;
  nlohmann::json to_json() const;
};

// Sets one dotted key from its textual value. Returns false for an unknown key;
// throws ConfigError naming the key when the value does not parse.
bool apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value);

struct ParsedConfig {
  SimulationConfig config;
  std::vector<std::string> warnings;
};

// Flat "key = value" lines; '#' starts a comment; lists are written [a, b, c].
// Unknown keys produce warnings. The result is validated.
ParsedConfig parse_config_text(const std::string& text, SimulationConfig base = {});
ParsedConfig parse_config(const std::string& path, SimulationConfig base = {});

std::vector<std::string> config_keys();

}  // namespace cssr
