#include "ionsim/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace ionsim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for key '" + key + "': " + value);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for key '" + key + "': " + value);
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

double ScenarioConfig::chi_value() const {
  if (!derive_chi) return chi;
  return eta * eta * omega_rabi * omega_rabi /
         (2.0 * (1.0 - delta * delta));  // nu = 1
}

void ScenarioConfig::validate() const {
  if (scenario != "fig1" && scenario != "fig3" && scenario != "oddn" &&
      scenario != "thermal")
    throw ConfigError("unknown scenario '" + scenario + "'");
  if (n_ions < 1) throw ConfigError("n_ions must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw ConfigError("delta must lie in (0, 1) (units of nu)");
  if (omega_rabi < 0.0) throw ConfigError("omega_rabi must be >= 0");
  if (eta < 0.0) throw ConfigError("eta must be >= 0");
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (n_th < 0.0) throw ConfigError("n_th must be >= 0");
  if (derive_chi && chi != 0.0)
    throw ConfigError("chi=derived and an explicit chi are mutually exclusive");
  if (!derive_chi && !(chi > 0.0)) throw ConfigError("chi must be positive");
  if (xi < 0.0) throw ConfigError("xi must be >= 0");
  if (!(dt > 0.0 && dt <= 0.02))
    throw ConfigError("dt must lie in (0, 0.02] (units of 1/nu)");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
  if (n_trajectories < 1) throw ConfigError("n_trajectories must be >= 1");
  if (t_final < 0.0) throw ConfigError("t_final must be >= 0");
  if (scenario == "oddn" && n_ions % 2 == 0)
    throw ConfigError("oddn scenario requires an odd n_ions");
}

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "scenario") cfg.scenario = value;
  else if (key == "n_ions") cfg.n_ions = static_cast<int>(parse_int(key, value));
  else if (key == "delta") cfg.delta = parse_double(key, value);
  else if (key == "omega_rabi") cfg.omega_rabi = parse_double(key, value);
  else if (key == "eta") cfg.eta = parse_double(key, value);
  else if (key == "n_max") cfg.n_max = static_cast<int>(parse_int(key, value));
  else if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "n_th") cfg.n_th = parse_double(key, value);
  else if (key == "chi") {
    if (value == "derived") {
      cfg.derive_chi = true;
      cfg.chi = 0.0;
    } else {
      cfg.derive_chi = false;
      cfg.chi = parse_double(key, value);
    }
  } else if (key == "xi") cfg.xi = parse_double(key, value);
  else if (key == "dt") cfg.dt = parse_double(key, value);
  else if (key == "record_stride")
    cfg.record_stride = static_cast<int>(parse_int(key, value));
  else if (key == "n_trajectories")
    cfg.n_trajectories = static_cast<int>(parse_int(key, value));
  else if (key == "master_seed")
    cfg.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "t_final") {
    if (value == "auto") cfg.t_final = 0.0;
    else cfg.t_final = parse_double(key, value);
  } else if (key == "out_dir") cfg.out_dir = value;
  else throw ConfigError("unknown key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text, ScenarioConfig defaults) {
  ScenarioConfig cfg = defaults;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    try {
      apply_override(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::string print_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "scenario=" << cfg.scenario << "\n";
  out << "n_ions=" << cfg.n_ions << "\n";
  out << "delta=" << format_double(cfg.delta) << "\n";
  out << "omega_rabi=" << format_double(cfg.omega_rabi) << "\n";
  out << "eta=" << format_double(cfg.eta) << "\n";
  out << "n_max=" << cfg.n_max << "\n";
  out << "gamma=" << format_double(cfg.gamma) << "\n";
  out << "n_th=" << format_double(cfg.n_th) << "\n";
  if (cfg.derive_chi) out << "chi=derived\n";
  else out << "chi=" << format_double(cfg.chi) << "\n";
  out << "xi=" << format_double(cfg.xi) << "\n";
  out << "dt=" << format_double(cfg.dt) << "\n";
  out << "record_stride=" << cfg.record_stride << "\n";
  out << "n_trajectories=" << cfg.n_trajectories << "\n";
  out << "master_seed=" << cfg.master_seed << "\n";
  if (cfg.t_final == 0.0) out << "t_final=auto\n";
  else out << "t_final=" << format_double(cfg.t_final) << "\n";
  out << "out_dir=" << cfg.out_dir << "\n";
  return out.str();
}

}  // namespace ionsim::cli
