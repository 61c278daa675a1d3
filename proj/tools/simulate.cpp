#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionsim/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion GHZ preparation simulator"};

  std::string scenario;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;

  app.add_option("scenario", scenario,
                 "scenario name: fig1 | fig3 | oddn | thermal")
      ->required();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", overrides, "override a single key=value pair");
  app.add_option("--out", out_dir, "output directory for CSV files");

  CLI11_PARSE(app, argc, argv);

  ionsim::cli::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "config error: cannot read " << config_path << "\n";
        return 1;
      }
      std::stringstream buffer;
      buffer << in.rdbuf();
      cfg = ionsim::cli::parse_config(buffer.str());
    }
    cfg.scenario = scenario;
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ionsim::cli::ConfigError("--set expects key=value, got '" + kv +
                                       "'");
      ionsim::cli::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
  } catch (const ionsim::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  return ionsim::cli::run_scenario(cfg);
}
