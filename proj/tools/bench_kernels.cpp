// Compares the serial dense-matrix Hamiltonian path against the matrix-free
// OpenMP kernel, for a single application and for a stretch of integration.

#include <cstdio>
#include <omp.h>
#include <random>

#include <Eigen/Dense>

#include "ionsim/open_system.hpp"
#include "ionsim/trap_model.hpp"

using namespace ionsim;

namespace {

Eigen::VectorXcd random_state(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = std::complex<double>(gauss(rng), gauss(rng));
  return v / v.norm();
}

}  // namespace

int main() {
  const trap::TrapParams params{1.0, 0.9, 0.1, 0.1, 4, 40};
  const trap::CompositeDims dims{params.n_ions, params.n_max};
  std::mt19937_64 rng(7);
  const Eigen::VectorXcd psi = random_state(dims.size(), rng);

  std::printf("composite dimension: %lld (N=%d, n_max=%d), threads: %d\n",
              static_cast<long long>(dims.size()), params.n_ions,
              params.n_max, omp_get_max_threads());

  // single application, dense reference vs matrix-free kernel
  const int reps = 200;
  const double t_eval = 37.5;

  double t0 = omp_get_wtime();
  Eigen::VectorXcd dense_out;
  {
    const Eigen::MatrixXcd h = trap::hamiltonian_at(t_eval, params);
    for (int r = 0; r < reps; ++r) dense_out = h * psi;
  }
  const double dense_time = (omp_get_wtime() - t0) / reps;

  trap::BichromaticKernel kernel(params);
  Eigen::VectorXcd kernel_out(dims.size());
  kernel.apply(t_eval, psi, kernel_out);  // warm up
  t0 = omp_get_wtime();
  for (int r = 0; r < reps; ++r) kernel.apply(t_eval, psi, kernel_out);
  const double kernel_time = (omp_get_wtime() - t0) / reps;

  const double diff = (dense_out - kernel_out).cwiseAbs().maxCoeff();
  std::printf("apply H(t):   dense %.3e s, kernel %.3e s, speedup %.2fx, "
              "max |diff| %.3e\n",
              dense_time, kernel_time, dense_time / kernel_time, diff);

  // short integration stretch (the matvec-dominated production path)
  trap::CompositeState initial =
      trap::initial_composite(params.n_ions, 0, params.n_max);
  const trap::IntegratorConfig cfg{0.01, 1000};
  t0 = omp_get_wtime();
  trap::integrate(initial, 0.0, 50.0, params, cfg);
  std::printf("integrate 50/nu: %.3f s (%.1f us/step)\n",
              omp_get_wtime() - t0, (omp_get_wtime() - t0) / 5000 * 1e6);

  // trajectory ensemble, serial vs parallel scheduling
  mcwf::BathParams bath{1e-4, 5.0};
  mcwf::TrajectoryConfig tcfg;
  tcfg.master_seed = 11;
  tcfg.n_trajectories = 4;
  tcfg.integrator = cfg;
  const auto weights = trap::thermal_weights(5.0, 40);

  t0 = omp_get_wtime();
  const auto serial =
      mcwf::run_ensemble(weights, params, bath, tcfg, 0.0, 20.0, false);
  const double serial_time = omp_get_wtime() - t0;
  t0 = omp_get_wtime();
  const auto parallel =
      mcwf::run_ensemble(weights, params, bath, tcfg, 0.0, 20.0, true);
  const double parallel_time = omp_get_wtime() - t0;

  double ens_diff = 0.0;
  for (std::size_t i = 0; i < serial.rho_internal.size(); ++i)
    ens_diff = std::max(ens_diff, (serial.rho_internal[i] -
                                   parallel.rho_internal[i])
                                      .cwiseAbs()
                                      .maxCoeff());
  std::printf("ensemble (4 traj, 20/nu): serial %.3f s, parallel %.3f s, "
              "speedup %.2fx, max |diff| %.3e\n",
              serial_time, parallel_time, serial_time / parallel_time,
              ens_diff);
  return 0;
}
