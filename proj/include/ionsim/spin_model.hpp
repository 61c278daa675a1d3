#pragma once

#include <Eigen/Dense>

// Collective-spin description of N identical two-level ions confined to the
// permutation-symmetric subspace. States live on |J=N/2, M>, M = -J..J,
// stored ascending in M (index 0 is the joint ground state). hbar = 1.

namespace ionsim::spin {

struct SpinBasis {
  explicit SpinBasis(int n_ions);

  int n_ions;
  int dimension() const { return n_ions + 1; }
  double j() const { return 0.5 * n_ions; }
  // M value at a given vector index, -J + index.
  double m_value(int index) const { return -j() + index; }
};

struct CollectiveOperators {
  Eigen::MatrixXcd j_plus;
  Eigen::MatrixXcd j_minus;
  Eigen::MatrixXcd j_x;
  Eigen::MatrixXcd j_z;
};

// J+ |J,M> = sqrt((J+M+1)(J-M)) |J,M+1>, J- its adjoint,
// Jx = (J+ + J-)/2, Jz = diag(M).
CollectiveOperators build_ladder(const SpinBasis& basis);

struct QuadraticDrive {
  double chi;       // pair-coupling strength, rad/time
  double duration;  // time
};

struct LinearDrive {
  double xi;        // carrier-coupling strength, rad/time
  double duration;  // time
};

// exp(-i 4 chi t Jx^2), evaluated through the Jx eigenbasis.
Eigen::MatrixXcd quadratic_propagator(const CollectiveOperators& ops,
                                      const QuadraticDrive& drive);

// exp(-i 4 xi t Jx). Commutes with the quadratic propagator.
Eigen::MatrixXcd linear_propagator(const CollectiveOperators& ops,
                                   const LinearDrive& drive);

// |J, -J>, all ions in g.
Eigen::VectorXcd ground_spin_state(const SpinBasis& basis);

struct GhzTarget {
  double phi_g;
  double phi_e;
  Eigen::VectorXcd amplitudes;  // weight only on M = -N/2 and M = +N/2
};

// (e^{i phi_g} |M=-N/2> + e^{i phi_e} |M=+N/2>)/sqrt(2) with
// phi_g = -pi/4, phi_e = pi/4 + N pi/2. Even N only; for odd N the phases
// produced by the combined linear+quadratic sequence are not pinned down, so
// callers must use ghz_fidelity_phase_optimized instead.
GhzTarget ghz_target(int n_ions);

// Best squared overlap with the GHZ family over its two free phases:
// (P_g + P_e)/2 + |c_g* c_e|.
double ghz_fidelity_phase_optimized(const Eigen::VectorXcd& state);

struct ExtremalPopulations {
  double ground;
  double excited;
};

// |<M=-N/2|psi>|^2 and |<M=+N/2|psi>|^2.
ExtremalPopulations extremal_populations(const Eigen::VectorXcd& state);

}  // namespace ionsim::spin
