#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ionsim::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario parameters, key=value text format, '#' comments. Defaults match
// the bundled fig3 experiment.
struct ScenarioConfig {
  std::string scenario = "fig3";  // fig1 | fig3 | oddn | thermal

  int n_ions = 4;
  double delta = 0.9;
  double omega_rabi = 0.1;
  double eta = 0.1;
  int n_max = 40;

  double gamma = 0.0001;
  double n_th = 5.0;

  bool derive_chi = true;  // chi from the trap parameters
  double chi = 0.0;        // explicit value when derive_chi is false
  double xi = 0.0;         // 0 = use chi

  double dt = 0.01;
  int record_stride = 100;

  int n_trajectories = 10;
  std::uint64_t master_seed = 1;

  double t_final = 0.0;  // 0 = scenario default
  std::string out_dir = ".";

  double chi_value() const;
  double xi_value() const { return xi > 0.0 ? xi : chi_value(); }
  void validate() const;  // throws ConfigError naming the offending key
  bool operator==(const ScenarioConfig&) const = default;
};

// Parses key=value text on top of the supplied defaults. Unknown keys,
// malformed lines and out-of-range values are rejected with the line number.
ScenarioConfig parse_config(const std::string& text,
                            ScenarioConfig defaults = {});

// Single key=value override (the --set flag).
void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);

// Full round-trippable dump: parse_config(print_config(c)) == c.
std::string print_config(const ScenarioConfig& cfg);

// Runs the named scenario and writes its CSV files under cfg.out_dir.
// Returns 0 on success, 2 on numerical failure (diagnostic on stderr).
int run_scenario(const ScenarioConfig& cfg);

}  // namespace ionsim::cli
