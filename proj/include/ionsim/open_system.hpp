#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ionsim/trap_model.hpp"

// Monte Carlo wave-function unraveling of a thermal bath coupled to the
// vibration through c1 = sqrt(Gamma (n_th+1)) a and c2 = sqrt(Gamma n_th) a+.
// Between jumps the state evolves under H_I(t) - (i/2)(c1+c1 + c2+c2)
// without renormalization; a jump fires when the squared norm crosses a
// uniform threshold drawn per epoch.

namespace ionsim::mcwf {

struct BathParams {
  double gamma = 0.0;  // units of nu
  double n_th = 0.0;
  void validate() const;
};

// -(i/2) Gamma [(n_th+1) a+a + n_th a a+] on the Fock factor, diagonal.
Eigen::MatrixXcd effective_hamiltonian_term(const BathParams& bath, int n_max);

struct TrajectoryConfig {
  std::uint64_t master_seed = 0;
  int n_trajectories = 1;
  trap::IntegratorConfig integrator;
  void validate() const;
};

struct JumpEvent {
  double time;
  int channel;  // 1 = cooling (a), 2 = heating (a_dagger)
};

// channel 1 applies a, channel 2 applies a_dagger, then renormalizes.
void apply_jump(trap::CompositeState& state, int channel);

struct TrajectoryResult {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> rho_internal;  // vibration traced out, normalized
  std::vector<double> mean_phonon;
  std::vector<double> norm2;  // pre-normalization squared norm at record times
  std::vector<JumpEvent> jumps;
  trap::CompositeState final_state;  // normalized
  int initial_fock = 0;
};

// Deterministic given (master_seed, trajectory_index): the per-trajectory
// RNG is an mt19937_64 seeded by a splitmix64 mix of the two, so results are
// reproducible across machines and scheduling orders.
TrajectoryResult run_trajectory(const trap::CompositeState& initial,
                                const trap::TrapParams& params,
                                const BathParams& bath,
                                const trap::IntegratorConfig& cfg,
                                std::uint64_t master_seed, int trajectory_index,
                                double t0, double t1);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> rho_internal;  // trajectory average
  std::vector<double> mean_phonon;             // trajectory average
  std::vector<TrajectoryResult> trajectories;
};

// Samples the initial Fock level per trajectory from fock_weights (as the
// first variate of that trajectory's stream), runs all trajectories, and
// averages. Trajectories run OpenMP-parallel when `parallel` is set; the
// reduction happens afterwards in index order, so the averages are bitwise
// identical either way.
EnsembleResult run_ensemble(const std::vector<double>& fock_weights,
                            const trap::TrapParams& params,
                            const BathParams& bath, const TrajectoryConfig& cfg,
                            double t0, double t1, bool parallel = true);

}  // namespace ionsim::mcwf
