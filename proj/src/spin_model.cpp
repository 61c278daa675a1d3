#include "ionsim/spin_model.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace ionsim::spin {

namespace {

using std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

void require_normalized(const Eigen::VectorXcd& state) {
  if (std::abs(state.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("spin state is not normalized");
}

// Propagator exp(-i f(Mx)) built in the Jx eigenbasis. Jx is Hermitian, so
// this is exact up to the eigensolver tolerance and manifestly unitary.
template <typename PhaseFn>
Eigen::MatrixXcd jx_function_propagator(const Eigen::MatrixXcd& j_x,
                                        PhaseFn&& phase) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(j_x);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Jx eigendecomposition failed");
  const Eigen::VectorXd& mx = es.eigenvalues();
  Eigen::VectorXcd phases(mx.size());
  for (Eigen::Index k = 0; k < mx.size(); ++k)
    phases(k) = std::exp(-kI * phase(mx(k)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

SpinBasis::SpinBasis(int n_ions_) : n_ions(n_ions_) {
  if (n_ions < 1)
    throw std::invalid_argument("SpinBasis requires at least one ion");
}

CollectiveOperators build_ladder(const SpinBasis& basis) {
  const int dim = basis.dimension();
  const double j = basis.j();
  CollectiveOperators ops;
  ops.j_plus = Eigen::MatrixXcd::Zero(dim, dim);
  ops.j_z = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = basis.m_value(k);
    ops.j_z(k, k) = m;
    if (k + 1 < dim)
      ops.j_plus(k + 1, k) = std::sqrt((j + m + 1.0) * (j - m));
  }
  ops.j_minus = ops.j_plus.adjoint();
  ops.j_x = 0.5 * (ops.j_plus + ops.j_minus);
  return ops;
}

Eigen::MatrixXcd quadratic_propagator(const CollectiveOperators& ops,
                                      const QuadraticDrive& drive) {
  if (!(drive.chi > 0.0))
    throw std::invalid_argument("QuadraticDrive requires chi > 0");
  const double s = 4.0 * drive.chi * drive.duration;
  return jx_function_propagator(ops.j_x, [s](double mx) { return s * mx * mx; });
}

Eigen::MatrixXcd linear_propagator(const CollectiveOperators& ops,
                                   const LinearDrive& drive) {
  if (!(drive.xi > 0.0))
    throw std::invalid_argument("LinearDrive requires xi > 0");
  const double s = 4.0 * drive.xi * drive.duration;
  return jx_function_propagator(ops.j_x, [s](double mx) { return s * mx; });
}

Eigen::VectorXcd ground_spin_state(const SpinBasis& basis) {
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(basis.dimension());
  state(0) = 1.0;
  return state;
}

GhzTarget ghz_target(int n_ions) {
  SpinBasis basis(n_ions);
  if (n_ions % 2 != 0)
    throw std::invalid_argument(
        "ghz_target: phases are only specified for even ion numbers; "
        "use ghz_fidelity_phase_optimized for odd N");
  GhzTarget target;
  target.phi_g = -pi / 4.0;
  target.phi_e = pi / 4.0 + n_ions * pi / 2.0;
  target.amplitudes = Eigen::VectorXcd::Zero(basis.dimension());
  const double w = 1.0 / std::sqrt(2.0);
  target.amplitudes(0) = w * std::exp(kI * target.phi_g);
  target.amplitudes(basis.dimension() - 1) = w * std::exp(kI * target.phi_e);
  return target;
}

double ghz_fidelity_phase_optimized(const Eigen::VectorXcd& state) {
  require_normalized(state);
  const std::complex<double> cg = state(0);
  const std::complex<double> ce = state(state.size() - 1);
  return 0.5 * (std::norm(cg) + std::norm(ce)) + std::abs(std::conj(cg) * ce);
}

ExtremalPopulations extremal_populations(const Eigen::VectorXcd& state) {
  require_normalized(state);
  return {std::norm(state(0)), std::norm(state(state.size() - 1))};
}

}  // namespace ionsim::spin
