#include "ionsim/trap_model.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>

namespace ionsim::trap {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

void TrapParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(delta > 0.0 && delta < nu))
    throw std::invalid_argument("delta must satisfy 0 < delta < nu");
  if (omega_rabi < 0.0) throw std::invalid_argument("omega_rabi must be >= 0");
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  if (n_ions < 1) throw std::invalid_argument("n_ions must be >= 1");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (eta * std::sqrt(static_cast<double>(n_max)) >= 1.0)
    std::cerr << "warning: eta*sqrt(n_max) = "
              << eta * std::sqrt(static_cast<double>(n_max))
              << " >= 1, Fock truncation may be inaccurate\n";
}

double TrapParams::chi() const {
  return eta * eta * omega_rabi * omega_rabi * nu /
         (2.0 * (nu * nu - delta * delta));
}

CompositeState initial_composite(int n_ions, int fock_level, int n_max) {
  CompositeDims dims{n_ions, n_max};
  if (n_ions < 1) throw std::invalid_argument("n_ions must be >= 1");
  if (fock_level < 0 || fock_level > n_max)
    throw std::invalid_argument("fock_level outside truncated space");
  CompositeState state{dims, Eigen::VectorXcd::Zero(dims.size())};
  state.amplitudes(dims.flat(0, fock_level)) = 1.0;
  return state;
}

std::vector<double> thermal_weights(double n_th, int n_cut) {
  if (n_th < 0.0) throw std::invalid_argument("n_th must be >= 0");
  if (n_cut < 0) throw std::invalid_argument("n_cut must be >= 0");
  std::vector<double> w(n_cut + 1);
  const double r = n_th / (n_th + 1.0);
  double sum = 0.0;
  for (int n = 0; n <= n_cut; ++n) {
    w[n] = std::pow(r, n);
    sum += w[n];
  }
  for (double& x : w) x /= sum;
  return w;
}

FockLadder build_fock_ladder(int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const int dim = n_max + 1;
  FockLadder ladder;
  ladder.a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n)
    ladder.a(n - 1, n) = std::sqrt(static_cast<double>(n));
  ladder.a_dagger = ladder.a.adjoint();
  return ladder;
}

Eigen::MatrixXcd build_displacement(double eta, int n_max) {
  if (eta < 0.0) throw std::invalid_argument("eta must be >= 0");
  FockLadder ladder = build_fock_ladder(n_max);
  // exp(i G) with G = eta (a + a_dagger) Hermitian
  Eigen::MatrixXcd g = eta * (ladder.a + ladder.a_dagger);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(kI * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd hamiltonian_at(double t, const TrapParams& params) {
  params.validate();
  const CompositeDims dims{params.n_ions, params.n_max};
  const Eigen::Index fd = dims.fock_dim();
  const Eigen::MatrixXcd d0 = build_displacement(params.eta, params.n_max);

  Eigen::VectorXcd phase(fd);
  for (Eigen::Index n = 0; n < fd; ++n)
    phase(n) = std::exp(-kI * (params.nu * t * static_cast<double>(n)));
  // Omega cos(delta t) carries the sum of the e^{+-i delta t} laser phases
  const Eigen::MatrixXcd coupling =
      (params.omega_rabi * std::cos(params.delta * t)) *
      (phase.asDiagonal() * d0 * phase.conjugate().asDiagonal());

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dims.size(), dims.size());
  for (int i = 0; i < params.n_ions; ++i) {
    const Eigen::Index bit = Eigen::Index{1} << i;
    for (Eigen::Index s = 0; s < dims.internal_dim(); ++s) {
      if (s & bit)  // <e|H|g> block for ion i
        h.block(s * fd, (s ^ bit) * fd, fd, fd) += coupling;
      else
        h.block(s * fd, (s ^ bit) * fd, fd, fd) += coupling.adjoint();
    }
  }
  return h;
}

BichromaticKernel::BichromaticKernel(const TrapParams& params)
    : params_(params) {
  params_.validate();
  displacement_ = build_displacement(params_.eta, params_.n_max);
  phase_.resize(dims().fock_dim());
  coupling_.resize(dims().fock_dim(), dims().fock_dim());
}

void BichromaticKernel::set_fock_diagonal(Eigen::VectorXcd diagonal) {
  if (diagonal.size() != 0 && diagonal.size() != dims().fock_dim())
    throw std::invalid_argument("fock diagonal has wrong length");
  fock_diagonal_ = std::move(diagonal);
}

void BichromaticKernel::apply(double t, const Eigen::VectorXcd& in,
                              Eigen::VectorXcd& out) const {
  const CompositeDims d = dims();
  const Eigen::Index fd = d.fock_dim();
  const Eigen::Index id = d.internal_dim();
  if (in.size() != d.size())
    throw std::invalid_argument("state size mismatch");
  out.resize(d.size());

  const double scale = params_.omega_rabi * std::cos(params_.delta * t);
  const bool coupled = scale != 0.0;
  if (coupled) {
    for (Eigen::Index n = 0; n < fd; ++n)
      phase_(n) = std::exp(-kI * (params_.nu * t * static_cast<double>(n)));
    coupling_.noalias() =
        scale * (phase_.asDiagonal() * displacement_ *
                 phase_.conjugate().asDiagonal());
  }

  const bool damped = fock_diagonal_.size() != 0;

#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < id; ++s) {
    auto dst = out.segment(s * fd, fd);
    if (damped)
      dst = fock_diagonal_.cwiseProduct(in.segment(s * fd, fd));
    else
      dst.setZero();
    if (!coupled) continue;
    for (int i = 0; i < params_.n_ions; ++i) {
      const Eigen::Index bit = Eigen::Index{1} << i;
      const auto src = in.segment((s ^ bit) * fd, fd);
      if (s & bit)
        dst.noalias() += coupling_ * src;
      else
        dst.noalias() += coupling_.adjoint() * src;
    }
  }
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (dt > 0.02)
    throw std::invalid_argument("dt > 0.02/nu does not resolve the ~2nu terms");
  if (record_stride < 1)
    throw std::invalid_argument("record_stride must be >= 1");
}

void Rk4Workspace::resize(Eigen::Index n) {
  k1.resize(n);
  k2.resize(n);
  k3.resize(n);
  k4.resize(n);
  tmp.resize(n);
}

void rk4_step(const BichromaticKernel& kernel, double t, double dt,
              Eigen::VectorXcd& psi, Rk4Workspace& ws) {
  const std::complex<double> mi{0.0, -1.0};
  kernel.apply(t, psi, ws.k1);
  ws.k1 *= mi;
  ws.tmp = psi + (0.5 * dt) * ws.k1;
  kernel.apply(t + 0.5 * dt, ws.tmp, ws.k2);
  ws.k2 *= mi;
  ws.tmp = psi + (0.5 * dt) * ws.k2;
  kernel.apply(t + 0.5 * dt, ws.tmp, ws.k3);
  ws.k3 *= mi;
  ws.tmp = psi + dt * ws.k3;
  kernel.apply(t + dt, ws.tmp, ws.k4);
  ws.k4 *= mi;
  psi += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

EvolutionRecord integrate(const CompositeState& initial, double t0, double t1,
                          const TrapParams& params,
                          const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t1 > t0)) throw std::invalid_argument("t1 must exceed t0");
  if (std::abs(initial.amplitudes.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("initial state is not normalized");

  BichromaticKernel kernel(params);
  if (initial.dims != kernel.dims())
    throw std::invalid_argument("state dimensions do not match trap params");

  Eigen::VectorXcd psi = initial.amplitudes;
  Rk4Workspace ws;
  ws.resize(psi.size());

  const long n_steps = std::lround((t1 - t0) / cfg.dt);
  EvolutionRecord record;
  record.times.push_back(t0);
  record.states.push_back(psi);
  double t = t0;
  for (long step = 0; step < n_steps; ++step) {
    rk4_step(kernel, t, cfg.dt, psi, ws);
    t = t0 + (step + 1) * cfg.dt;
    const double drift = std::abs(psi.squaredNorm() - 1.0);
    if (drift > 1e-4)
      throw std::runtime_error(
          "integrate: norm drift " + std::to_string(drift) +
          " at t=" + std::to_string(t) +
          "; reduce dt or raise the Fock truncation");
    if ((step + 1) % cfg.record_stride == 0 || step + 1 == n_steps) {
      record.times.push_back(t);
      record.states.push_back(psi);
    }
  }
  return record;
}

}  // namespace ionsim::trap
