#include "ionsim/open_system.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include "ionsim/analysis.hpp"

namespace ionsim::mcwf {

namespace {

// splitmix64, the documented seeding function: trajectory k uses
// mt19937_64 seeded with mix(master_seed, k).
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trajectory_stream(std::uint64_t master_seed, int index) {
  const std::uint64_t mixed =
      splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
  return std::mt19937_64(mixed);
}

// uniform in (0,1); built from raw engine output so the variate sequence is
// identical across standard libraries
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

int sample_discrete(const std::vector<double>& weights, double total,
                    std::mt19937_64& rng) {
  const double u = uniform_open(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u <= acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

double mean_phonon_of(const Eigen::VectorXcd& psi, const trap::CompositeDims& dims) {
  const Eigen::Index fd = dims.fock_dim();
  double num = 0.0, den = 0.0;
  for (Eigen::Index s = 0; s < dims.internal_dim(); ++s)
    for (Eigen::Index n = 0; n < fd; ++n) {
      const double p = std::norm(psi(dims.flat(s, n)));
      num += static_cast<double>(n) * p;
      den += p;
    }
  return num / den;
}

TrajectoryResult run_stream(const trap::CompositeState& initial,
                            const trap::TrapParams& params,
                            const BathParams& bath,
                            const trap::IntegratorConfig& cfg,
                            std::mt19937_64& rng, double t0, double t1) {
  cfg.validate();
  bath.validate();
  if (!(t1 > t0)) throw std::invalid_argument("t1 must exceed t0");
  if (std::abs(initial.amplitudes.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("initial state is not normalized");

  trap::BichromaticKernel kernel(params);
  if (initial.dims != kernel.dims())
    throw std::invalid_argument("state dimensions do not match trap params");

  const trap::CompositeDims dims = kernel.dims();
  const Eigen::Index fd = dims.fock_dim();
  const bool open = bath.gamma > 0.0;
  if (open) {
    const Eigen::MatrixXcd term = effective_hamiltonian_term(bath, params.n_max);
    kernel.set_fock_diagonal(term.diagonal());
  }

  Eigen::VectorXcd psi = initial.amplitudes;
  trap::Rk4Workspace ws;
  ws.resize(psi.size());

  TrajectoryResult result;
  auto record = [&](double t) {
    const double n2 = psi.squaredNorm();
    Eigen::VectorXcd normalized = psi / std::sqrt(n2);
    trap::CompositeState snap{dims, std::move(normalized)};
    result.times.push_back(t);
    result.rho_internal.push_back(analysis::trace_out_vibration(snap));
    result.mean_phonon.push_back(mean_phonon_of(psi, dims));
    result.norm2.push_back(n2);
  };
  record(t0);

  double epsilon = open ? uniform_open(rng) : 0.0;
  const long n_steps = std::lround((t1 - t0) / cfg.dt);
  double t = t0;
  for (long step = 0; step < n_steps; ++step) {
    trap::rk4_step(kernel, t, cfg.dt, psi, ws);
    t = t0 + (step + 1) * cfg.dt;
    if (open && psi.squaredNorm() <= epsilon) {
      // jump epoch: pick the channel by its instantaneous rate
      double w1 = 0.0, w2 = 0.0;
      for (Eigen::Index s = 0; s < dims.internal_dim(); ++s)
        for (Eigen::Index n = 0; n < fd; ++n) {
          const double p = std::norm(psi(dims.flat(s, n)));
          w1 += static_cast<double>(n) * p;
          if (n < fd - 1) w2 += static_cast<double>(n + 1) * p;
        }
      w1 *= bath.gamma * (bath.n_th + 1.0);
      w2 *= bath.gamma * bath.n_th;
      if (!(w1 + w2 > 0.0))
        throw std::runtime_error(
            "mcwf: norm underflow without jump resolution at t=" +
            std::to_string(t));
      const int channel = uniform_open(rng) * (w1 + w2) < w1 ? 1 : 2;
      trap::CompositeState state{dims, std::move(psi)};
      apply_jump(state, channel);
      psi = std::move(state.amplitudes);
      result.jumps.push_back({t, channel});
      epsilon = uniform_open(rng);
    } else if (!open) {
      const double drift = std::abs(psi.squaredNorm() - 1.0);
      if (drift > 1e-4)
        throw std::runtime_error("mcwf: norm drift " + std::to_string(drift) +
                                 " at t=" + std::to_string(t));
    }
    if ((step + 1) % cfg.record_stride == 0 || step + 1 == n_steps) record(t);
  }

  result.final_state = trap::CompositeState{dims, psi / psi.norm()};
  return result;
}

}  // namespace

void BathParams::validate() const {
  if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (n_th < 0.0) throw std::invalid_argument("n_th must be >= 0");
}

Eigen::MatrixXcd effective_hamiltonian_term(const BathParams& bath, int n_max) {
  bath.validate();
  const int dim = n_max + 1;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Zero(dim, dim);
  if (bath.gamma == 0.0) return term;
  for (int n = 0; n < dim; ++n) {
    // heating contributes (n+1) only below the truncation level: the
    // truncated raising operator annihilates |n_max>, so its rate must too,
    // or the non-Hermitian decay would never be resolved by a jump there
    const double heating = n < n_max ? n + 1.0 : 0.0;
    const double rate =
        bath.gamma * ((bath.n_th + 1.0) * n + bath.n_th * heating);
    term(n, n) = std::complex<double>(0.0, -0.5 * rate);
  }
  return term;
}

void TrajectoryConfig::validate() const {
  integrator.validate();
  if (n_trajectories < 1)
    throw std::invalid_argument("n_trajectories must be >= 1");
}

void apply_jump(trap::CompositeState& state, int channel) {
  if (channel != 1 && channel != 2)
    throw std::invalid_argument("jump channel must be 1 or 2");
  const Eigen::Index fd = state.dims.fock_dim();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.amplitudes.size());
  for (Eigen::Index s = 0; s < state.dims.internal_dim(); ++s)
    for (Eigen::Index n = 0; n < fd; ++n) {
      if (channel == 1 && n + 1 < fd)  // a: |n+1> -> sqrt(n+1) |n>
        out(state.dims.flat(s, n)) =
            std::sqrt(static_cast<double>(n + 1)) *
            state.amplitudes(state.dims.flat(s, n + 1));
      else if (channel == 2 && n >= 1)  // a+: |n-1> -> sqrt(n) |n>
        out(state.dims.flat(s, n)) =
            std::sqrt(static_cast<double>(n)) *
            state.amplitudes(state.dims.flat(s, n - 1));
    }
  const double norm = out.norm();
  if (!(norm > 0.0)) throw std::runtime_error("jump annihilated the state");
  state.amplitudes = out / norm;
}

TrajectoryResult run_trajectory(const trap::CompositeState& initial,
                                const trap::TrapParams& params,
                                const BathParams& bath,
                                const trap::IntegratorConfig& cfg,
                                std::uint64_t master_seed, int trajectory_index,
                                double t0, double t1) {
  std::mt19937_64 rng = trajectory_stream(master_seed, trajectory_index);
  TrajectoryResult result = run_stream(initial, params, bath, cfg, rng, t0, t1);
  result.initial_fock = -1;  // supplied externally, not sampled
  return result;
}

EnsembleResult run_ensemble(const std::vector<double>& fock_weights,
                            const trap::TrapParams& params,
                            const BathParams& bath, const TrajectoryConfig& cfg,
                            double t0, double t1, bool parallel) {
  cfg.validate();
  params.validate();
  if (fock_weights.empty())
    throw std::invalid_argument("fock_weights must be non-empty");
  if (static_cast<int>(fock_weights.size()) > params.n_max + 1)
    throw std::invalid_argument("fock_weights extend beyond n_max");
  double total = 0.0;
  for (double w : fock_weights) {
    if (w < 0.0) throw std::invalid_argument("fock_weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("fock_weights sum to zero");

  const int n_traj = cfg.n_trajectories;
  std::vector<TrajectoryResult> results(n_traj);
  bool failed = false;
  std::string error;

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < n_traj; ++k) {
    try {
      std::mt19937_64 rng = trajectory_stream(cfg.master_seed, k);
      const int n0 = sample_discrete(fock_weights, total, rng);
      trap::CompositeState initial =
          trap::initial_composite(params.n_ions, n0, params.n_max);
      results[k] =
          run_stream(initial, params, bath, cfg.integrator, rng, t0, t1);
      results[k].initial_fock = n0;
    } catch (const std::exception& e) {
#pragma omp critical
      {
        failed = true;
        error = e.what();
      }
    }
  }
  if (failed) throw std::runtime_error("trajectory failed: " + error);

  EnsembleResult ensemble;
  ensemble.times = results[0].times;
  const std::size_t n_samples = ensemble.times.size();
  const Eigen::Index id = results[0].rho_internal[0].rows();
  ensemble.rho_internal.assign(n_samples, Eigen::MatrixXcd::Zero(id, id));
  ensemble.mean_phonon.assign(n_samples, 0.0);
  // fixed index order keeps the average independent of scheduling
  for (int k = 0; k < n_traj; ++k)
    for (std::size_t i = 0; i < n_samples; ++i) {
      ensemble.rho_internal[i] += results[k].rho_internal[i];
      ensemble.mean_phonon[i] += results[k].mean_phonon[i];
    }
  for (std::size_t i = 0; i < n_samples; ++i) {
    ensemble.rho_internal[i] /= n_traj;
    ensemble.mean_phonon[i] /= n_traj;
  }
  ensemble.trajectories = std::move(results);
  return ensemble;
}

}  // namespace ionsim::mcwf
