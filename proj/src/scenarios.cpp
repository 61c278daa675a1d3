#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "ionsim/analysis.hpp"
#include "ionsim/config.hpp"
#include "ionsim/open_system.hpp"
#include "ionsim/spin_model.hpp"
#include "ionsim/trap_model.hpp"

namespace ionsim::cli {

namespace {

using std::numbers::pi;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ScenarioConfig& cfg,
            const std::string& columns) {
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    std::istringstream dump(print_config(cfg));
    std::string line;
    while (std::getline(dump, line)) out_ << "# " << line << "\n";
    out_ << columns << "\n";
  }

  void row(std::initializer_list<double> values) {
    char buf[64];
    bool first = true;
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      if (!first) out_ << ",";
      out_ << buf;
      first = false;
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

trap::TrapParams trap_params_of(const ScenarioConfig& cfg) {
  trap::TrapParams params;
  params.nu = 1.0;
  params.delta = cfg.delta;
  params.omega_rabi = cfg.omega_rabi;
  params.eta = cfg.eta;
  params.n_ions = cfg.n_ions;
  params.n_max = cfg.n_max;
  return params;
}

void run_fig1(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  for (int n : {2, 4, 8}) {
    spin::SpinBasis basis(n);
    const spin::CollectiveOperators ops = spin::build_ladder(basis);
    const Eigen::VectorXcd psi0 = spin::ground_spin_state(basis);
    CsvWriter csv(dir / ("fig1_N" + std::to_string(n) + ".csv"), cfg,
                  "chi_t,p_ground,p_excited");
    for (int k = 0; k <= 600; ++k) {
      const double chi_t = k * pi / 400.0;
      Eigen::VectorXcd psi = psi0;
      if (chi_t > 0.0)
        psi = spin::quadratic_propagator(ops, {1.0, chi_t}) * psi0;
      const auto pops = spin::extremal_populations(psi);
      csv.row({chi_t, pops.ground, pops.excited});
    }
  }
}

void run_oddn(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  spin::SpinBasis basis(cfg.n_ions);
  const spin::CollectiveOperators ops = spin::build_ladder(basis);
  const Eigen::VectorXcd psi0 = spin::ground_spin_state(basis);
  const double xi_over_chi = cfg.xi_value() / cfg.chi_value();
  CsvWriter csv(dir / ("oddn_N" + std::to_string(cfg.n_ions) + ".csv"), cfg,
                "chi_t,fidelity");
  // quadratic and linear drives applied simultaneously (they commute)
  for (int k = 0; k <= 300; ++k) {
    const double chi_t = k * pi / 400.0;
    Eigen::VectorXcd psi = psi0;
    if (chi_t > 0.0)
      psi = spin::linear_propagator(ops, {xi_over_chi, chi_t}) *
            spin::quadratic_propagator(ops, {1.0, chi_t}) * psi0;
    csv.row({chi_t, spin::ghz_fidelity_phase_optimized(psi)});
  }
}

void write_observables(const std::filesystem::path& path,
                       const ScenarioConfig& cfg,
                       const analysis::InternalObservables& obs) {
  CsvWriter csv(path, cfg, "nu_t,p_ground,im_coherence,p_excited,re_coherence");
  for (std::size_t i = 0; i < obs.times.size(); ++i)
    csv.row({obs.times[i], obs.p_ground[i], obs.im_coherence[i],
             obs.p_excited[i], obs.re_coherence[i]});
}

void run_fig3(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  const trap::TrapParams params = trap_params_of(cfg);
  const double chi = cfg.chi_value();
  const double t1 = cfg.t_final > 0.0 ? cfg.t_final : 1600.0;

  mcwf::BathParams bath{cfg.gamma, cfg.n_th};
  mcwf::TrajectoryConfig tcfg;
  tcfg.master_seed = cfg.master_seed;
  tcfg.n_trajectories = cfg.n_trajectories;
  tcfg.integrator = {cfg.dt, cfg.record_stride};

  const std::vector<double> weights =
      trap::thermal_weights(cfg.n_th, std::min(cfg.n_max, 40));
  const mcwf::EnsembleResult ensemble =
      mcwf::run_ensemble(weights, params, bath, tcfg, 0.0, t1);

  const mcwf::TrajectoryResult& first = ensemble.trajectories[0];
  write_observables(dir / "fig3_single.csv", cfg,
                    analysis::extract_internal_observables(
                        first.times, first.rho_internal));
  write_observables(dir / "fig3_average.csv", cfg,
                    analysis::extract_internal_observables(
                        ensemble.times, ensemble.rho_internal));
  write_observables(
      dir / "fig3_spin.csv", cfg,
      analysis::spin_reference_curves(ensemble.times, chi, cfg.n_ions));

  CsvWriter jumps(dir / "fig3_jumps.csv", cfg, "trajectory,nu_t,channel");
  for (std::size_t k = 0; k < ensemble.trajectories.size(); ++k)
    for (const mcwf::JumpEvent& jump : ensemble.trajectories[k].jumps)
      jumps.row({static_cast<double>(k), jump.time,
                 static_cast<double>(jump.channel)});
}

void run_thermal(const ScenarioConfig& cfg, const std::filesystem::path& dir) {
  trap::TrapParams params = trap_params_of(cfg);
  params.omega_rabi = 0.0;  // bath relaxation only
  const double t1 = cfg.t_final > 0.0
                        ? cfg.t_final
                        : (cfg.gamma > 0.0 ? 3.0 / cfg.gamma : 100.0);

  mcwf::BathParams bath{cfg.gamma, cfg.n_th};
  mcwf::TrajectoryConfig tcfg;
  tcfg.master_seed = cfg.master_seed;
  tcfg.n_trajectories = cfg.n_trajectories;
  tcfg.integrator = {cfg.dt, cfg.record_stride};

  const std::vector<double> weights{1.0};  // start in |0>
  const mcwf::EnsembleResult ensemble =
      mcwf::run_ensemble(weights, params, bath, tcfg, 0.0, t1);

  CsvWriter csv(dir / "thermal.csv", cfg, "nu_t,mean_n,analytic_mean_n");
  for (std::size_t i = 0; i < ensemble.times.size(); ++i) {
    const double t = ensemble.times[i];
    csv.row({t, ensemble.mean_phonon[i],
             cfg.n_th * (1.0 - std::exp(-cfg.gamma * t))});
  }
}

}  // namespace

int run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  try {
    if (cfg.scenario == "fig1") run_fig1(cfg, dir);
    else if (cfg.scenario == "fig3") run_fig3(cfg, dir);
    else if (cfg.scenario == "oddn") run_oddn(cfg, dir);
    else if (cfg.scenario == "thermal") run_thermal(cfg, dir);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace ionsim::cli
