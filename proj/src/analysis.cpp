#include "ionsim/analysis.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ionsim/spin_model.hpp"

namespace ionsim::analysis {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

void symmetrize(Eigen::MatrixXcd& rho) {
  rho = 0.5 * (rho + rho.adjoint().eval());
}

}  // namespace

Eigen::MatrixXcd trace_out_vibration(const trap::CompositeState& state) {
  const Eigen::Index id = state.dims.internal_dim();
  const Eigen::Index fd = state.dims.fock_dim();
  if (state.amplitudes.size() != state.dims.size())
    throw std::invalid_argument("composite state size mismatch");
  // amplitudes reshape to (fock, internal) column-major
  Eigen::Map<const Eigen::MatrixXcd> psi(state.amplitudes.data(), fd, id);
  Eigen::MatrixXcd rho = psi.transpose() * psi.conjugate();
  symmetrize(rho);
  return rho;
}

Eigen::MatrixXcd trace_out_vibration(
    const std::vector<trap::CompositeState>& ensemble) {
  if (ensemble.empty())
    throw std::invalid_argument("empty ensemble");
  Eigen::MatrixXcd rho = trace_out_vibration(ensemble[0]);
  for (std::size_t k = 1; k < ensemble.size(); ++k)
    rho += trace_out_vibration(ensemble[k]);
  return rho / static_cast<double>(ensemble.size());
}

SymmetricProjection project_symmetric(const Eigen::MatrixXcd& rho_internal,
                                      int n_ions) {
  const Eigen::Index id = Eigen::Index{1} << n_ions;
  if (rho_internal.rows() != id || rho_internal.cols() != id)
    throw std::invalid_argument("density matrix size does not match n_ions");
  // Dicke state with k excitations: uniform superposition of all bitstrings
  // of popcount k, weight 1/sqrt(C(N,k))
  Eigen::MatrixXcd dicke = Eigen::MatrixXcd::Zero(id, n_ions + 1);
  for (Eigen::Index s = 0; s < id; ++s) {
    const int k = std::popcount(static_cast<unsigned long long>(s));
    dicke(s, k) = 1.0 / std::sqrt(binomial(n_ions, k));
  }
  SymmetricProjection out;
  out.rho_symmetric = dicke.adjoint() * rho_internal * dicke;
  out.leakage = 1.0 - out.rho_symmetric.trace().real();
  return out;
}

double purity(const Eigen::MatrixXcd& rho) {
  return (rho * rho).trace().real();
}

InternalObservables extract_internal_observables(
    const std::vector<double>& times,
    const std::vector<Eigen::MatrixXcd>& rho_series) {
  if (times.size() != rho_series.size())
    throw std::invalid_argument("times and rho series lengths differ");
  InternalObservables obs;
  obs.times = times;
  for (const Eigen::MatrixXcd& rho : rho_series) {
    const Eigen::Index last = rho.rows() - 1;
    obs.p_ground.push_back(rho(0, 0).real());
    obs.p_excited.push_back(rho(last, last).real());
    obs.re_coherence.push_back(rho(0, last).real());
    obs.im_coherence.push_back(rho(0, last).imag());
  }
  return obs;
}

double ghz_fidelity(const Eigen::MatrixXcd& rho_internal) {
  const Eigen::Index last = rho_internal.rows() - 1;
  return 0.5 * (rho_internal(0, 0).real() + rho_internal(last, last).real()) +
         std::abs(rho_internal(0, last));
}

InternalObservables spin_reference_curves(const std::vector<double>& times,
                                          double chi, int n_ions) {
  spin::SpinBasis basis(n_ions);
  const spin::CollectiveOperators ops = spin::build_ladder(basis);
  const Eigen::VectorXcd psi0 = spin::ground_spin_state(basis);
  InternalObservables obs;
  obs.times = times;
  for (double t : times) {
    Eigen::VectorXcd psi;
    if (t == 0.0) {
      psi = psi0;
    } else {
      psi = spin::quadratic_propagator(ops, {chi, t}) * psi0;
    }
    const std::complex<double> cg = psi(0);
    const std::complex<double> ce = psi(psi.size() - 1);
    obs.p_ground.push_back(std::norm(cg));
    obs.p_excited.push_back(std::norm(ce));
    // realized sign: microscopic coherence is the conjugate of cg ce*
    const std::complex<double> coh = std::conj(cg * std::conj(ce));
    obs.re_coherence.push_back(coh.real());
    obs.im_coherence.push_back(coh.imag());
  }
  return obs;
}

DeviationReport compare_to_spin_model(const InternalObservables& observed,
                                      double chi, int n_ions) {
  const InternalObservables ref =
      spin_reference_curves(observed.times, chi, n_ions);
  const std::size_t n = observed.times.size();
  if (observed.p_ground.size() != n || observed.p_excited.size() != n ||
      observed.re_coherence.size() != n || observed.im_coherence.size() != n)
    throw std::invalid_argument("observable series lengths differ from grid");
  DeviationReport report{0.0, 0.0};
  double sum_sq = 0.0;
  std::size_t count = 0;
  auto accumulate = [&](const std::vector<double>& a,
                        const std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::abs(a[i] - b[i]);
      report.max_deviation = std::max(report.max_deviation, d);
      sum_sq += d * d;
      ++count;
    }
  };
  accumulate(observed.p_ground, ref.p_ground);
  accumulate(observed.p_excited, ref.p_excited);
  accumulate(observed.re_coherence, ref.re_coherence);
  accumulate(observed.im_coherence, ref.im_coherence);
  report.rms_deviation = std::sqrt(sum_sq / count);
  return report;
}

}  // namespace ionsim::analysis
