#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

// Microscopic model of N two-level ions sharing the center-of-mass mode of a
// linear trap, driven by a bichromatic field at omega_eg -+ delta. Everything
// is expressed in the interaction picture with respect to the free
// Hamiltonian, in units nu = 1 and hbar = 1, so the only surviving time
// dependences are the e^{+-i delta t} laser phases and the e^{+-i nu t}
// rotation of the vibrational ladder.

namespace ionsim::trap {

struct TrapParams {
  double nu = 1.0;      // center-of-mass frequency (internal unit)
  double delta;         // laser detuning magnitude, units of nu
  double omega_rabi;    // Rabi frequency, units of nu
  double eta;           // Dicke parameter
  int n_ions;
  int n_max;            // Fock truncation level

  // throws on invalid values; warns on stderr when eta*sqrt(n_max) >= 1
  void validate() const;

  // second-order pair coupling eta^2 Omega^2 nu / (2 (nu^2 - delta^2))
  double chi() const;
};

struct CompositeDims {
  int n_ions;
  int n_max;
  Eigen::Index internal_dim() const { return Eigen::Index{1} << n_ions; }
  Eigen::Index fock_dim() const { return n_max + 1; }
  Eigen::Index size() const { return internal_dim() * fock_dim(); }
  // internal bitstring major (bit i set = ion i excited), Fock level minor
  Eigen::Index flat(Eigen::Index internal, Eigen::Index fock) const {
    return internal * fock_dim() + fock;
  }
  bool operator==(const CompositeDims&) const = default;
};

struct CompositeState {
  CompositeDims dims;
  Eigen::VectorXcd amplitudes;
};

// All ions in g, vibration in Fock level n.
CompositeState initial_composite(int n_ions, int fock_level, int n_max);

// p(n) proportional to (n_th/(n_th+1))^n for n = 0..n_cut, renormalized.
std::vector<double> thermal_weights(double n_th, int n_cut);

struct FockLadder {
  Eigen::MatrixXcd a;
  Eigen::MatrixXcd a_dagger;
};
FockLadder build_fock_ladder(int n_max);

// exp(i eta (a + a_dagger)) on the truncated Fock space, exact to all orders
// in eta. Unitarity degrades only in the last few Fock rows (truncation).
Eigen::MatrixXcd build_displacement(double eta, int n_max);

// Dense interaction-picture Hamiltonian
//   H_I(t) = Omega cos(delta t) sum_i sigma+_i D(t) + h.c.
//   D(t)   = exp(i eta (a e^{-i nu t} + a_dagger e^{i nu t}))
// Serial reference path; the integrator uses BichromaticKernel instead.
Eigen::MatrixXcd hamiltonian_at(double t, const TrapParams& params);

// Matrix-free H_I(t) application. D(t) is obtained from the static
// displacement by Fock-phase conjugation, then applied blockwise per ion;
// the block loop is OpenMP-parallel over internal bitstrings. An optional
// complex diagonal on the Fock factor carries the non-Hermitian bath term.
// apply() reuses internal scratch, so one kernel serves one thread at a time;
// concurrent trajectories each own a kernel.
class BichromaticKernel {
 public:
  explicit BichromaticKernel(const TrapParams& params);

  void set_fock_diagonal(Eigen::VectorXcd diagonal);  // length n_max+1

  // out = H(t) in, where H = H_I(t) + diag term (if set)
  void apply(double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  const TrapParams& params() const { return params_; }
  CompositeDims dims() const { return {params_.n_ions, params_.n_max}; }

 private:
  TrapParams params_;
  Eigen::MatrixXcd displacement_;
  Eigen::VectorXcd fock_diagonal_;       // empty when no bath term
  mutable Eigen::VectorXcd phase_;       // e^{-i n nu t}
  mutable Eigen::MatrixXcd coupling_;    // Omega cos(delta t) D(t)
};

struct IntegratorConfig {
  double dt = 0.01;        // units of 1/nu
  int record_stride = 100;
  void validate() const;   // dt must resolve the ~2 nu rotating terms
};

// One classical RK4 step of dpsi/dt = -i H(t) psi. Scratch vectors are
// caller-owned so trajectory loops do not allocate.
struct Rk4Workspace {
  Eigen::VectorXcd k1, k2, k3, k4, tmp;
  void resize(Eigen::Index n);
};
void rk4_step(const BichromaticKernel& kernel, double t, double dt,
              Eigen::VectorXcd& psi, Rk4Workspace& ws);

struct EvolutionRecord {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
};

// Fixed-step closed-system integration from t0 to t1, recording every
// record_stride steps (plus the final point). Throws if the norm drifts by
// more than 1e-4, which indicates truncation or step-size trouble.
EvolutionRecord integrate(const CompositeState& initial, double t0, double t1,
                          const TrapParams& params, const IntegratorConfig& cfg);

}  // namespace ionsim::trap
