#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "ionsim/trap_model.hpp"

using namespace ionsim::trap;

static Eigen::VectorXcd random_state(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = std::complex<double>(gauss(rng), gauss(rng));
  return v / v.norm();
}

TEST_CASE("fock ladder") {
  auto ladder = build_fock_ladder(5);

  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(6);
  vac(0) = 1.0;
  CHECK((ladder.a * vac).norm() == doctest::Approx(0.0));

  for (int n = 0; n < 5; ++n) {
    Eigen::VectorXcd fock = Eigen::VectorXcd::Zero(6);
    fock(n) = 1.0;
    Eigen::VectorXcd raised = ladder.a_dagger * fock;
    CHECK(std::abs(raised(n + 1)) == doctest::Approx(std::sqrt(n + 1.0)));
  }

  // [a, a+] = I apart from the truncation corner
  Eigen::MatrixXcd comm =
      ladder.a * ladder.a_dagger - ladder.a_dagger * ladder.a;
  for (int n = 0; n < 5; ++n) CHECK(comm(n, n).real() == doctest::Approx(1.0));
  CHECK(comm(5, 5).real() == doctest::Approx(-5.0));
}

TEST_CASE("displacement operator") {
  SUBCASE("eta=0 is the identity") {
    Eigen::MatrixXcd d = build_displacement(0.0, 8);
    CHECK((d - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("vacuum matrix elements match the coherent-state overlap") {
    const double eta = 0.1;
    Eigen::MatrixXcd d = build_displacement(eta, 30);
    const double w = std::exp(-eta * eta / 2.0);
    CHECK(std::abs(d(0, 0) - std::complex<double>(w, 0.0)) < 1e-10);
    CHECK(std::abs(d(1, 0) - std::complex<double>(0.0, eta * w)) < 1e-10);
  }

  SUBCASE("unitary away from the truncation edge") {
    Eigen::MatrixXcd d = build_displacement(0.2, 20);
    Eigen::MatrixXcd gram = d.adjoint() * d;
    CHECK((gram.topLeftCorner(15, 15) -
           Eigen::MatrixXcd::Identity(15, 15)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("trap params") {
  TrapParams params{1.0, 0.9, 0.1, 0.1, 2, 10};
  params.validate();
  CHECK(params.chi() == doctest::Approx(2.6315789473684e-4).epsilon(1e-10));

  TrapParams bad = params;
  bad.delta = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = params;
  bad.n_max = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("hamiltonian dense reference") {
  const TrapParams params{1.0, 0.9, 0.1, 0.1, 2, 6};

  SUBCASE("zero Rabi frequency gives the zero matrix") {
    TrapParams off = params;
    off.omega_rabi = 0.0;
    CHECK(hamiltonian_at(3.7, off).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("Hermitian at arbitrary times") {
    for (double t : {0.0, 0.41, 7.3, 211.0}) {
      Eigen::MatrixXcd h = hamiltonian_at(t, params);
      CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SUBCASE("matrix-free kernel agrees with the dense path") {
    BichromaticKernel kernel(params);
    const CompositeDims dims{params.n_ions, params.n_max};
    Eigen::VectorXcd out(dims.size());
    for (double t : {0.0, 1.3, 45.6}) {
      const Eigen::MatrixXcd h = hamiltonian_at(t, params);
      const Eigen::VectorXcd psi = random_state(dims.size(), 17 + (unsigned)t);
      kernel.apply(t, psi, out);
      CHECK((out - h * psi).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("kernel diagonal term") {
    BichromaticKernel kernel(params);
    Eigen::VectorXcd diag(params.n_max + 1);
    for (int n = 0; n <= params.n_max; ++n)
      diag(n) = std::complex<double>(0.0, -0.1 * n);
    kernel.set_fock_diagonal(diag);
    const CompositeDims dims{params.n_ions, params.n_max};
    const Eigen::VectorXcd psi = random_state(dims.size(), 5);
    Eigen::VectorXcd out(dims.size());
    kernel.apply(0.9, psi, out);
    Eigen::MatrixXcd h = hamiltonian_at(0.9, params);
    for (Eigen::Index s = 0; s < dims.internal_dim(); ++s)
      for (Eigen::Index n = 0; n < dims.fock_dim(); ++n)
        h(dims.flat(s, n), dims.flat(s, n)) += diag(n);
    CHECK((out - h * psi).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("initial states") {
  auto state = initial_composite(4, 0, 10);
  CHECK(state.amplitudes.size() == 16 * 11);
  CHECK(std::norm(state.amplitudes(0)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(initial_composite(2, 11, 10), std::invalid_argument);

  auto weights = thermal_weights(5.0, 40);
  double sum = 0.0;
  for (double w : weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(weights[1] / weights[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(weights.size() == 41);
}

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg{0.05, 10};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {0.01, 0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {0.01, 10};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("closed-system integration") {
  const TrapParams params{1.0, 0.9, 0.1, 0.1, 2, 8};

  SUBCASE("zero drive leaves the state untouched") {
    TrapParams off = params;
    off.omega_rabi = 0.0;
    auto initial = initial_composite(2, 3, 8);
    auto record = integrate(initial, 0.0, 5.0, off, {0.01, 100});
    CHECK((record.states.back() - initial.amplitudes).cwiseAbs().maxCoeff() <
          1e-13);
  }

  SUBCASE("norm is conserved") {
    auto initial = initial_composite(2, 0, 8);
    auto record = integrate(initial, 0.0, 50.0, params, {0.01, 500});
    CHECK(std::abs(record.states.back().squaredNorm() - 1.0) < 1e-9);
  }

  SUBCASE("self-convergence under step halving") {
    auto initial = initial_composite(2, 0, 8);
    auto coarse = integrate(initial, 0.0, 20.0, params, {0.01, 2000});
    auto fine = integrate(initial, 0.0, 20.0, params, {0.005, 4000});
    CHECK((coarse.states.back() - fine.states.back()).cwiseAbs().maxCoeff() <
          1e-8);
  }

  SUBCASE("recorded times follow the stride") {
    auto initial = initial_composite(2, 0, 8);
    auto record = integrate(initial, 0.0, 2.0, params, {0.01, 50});
    CHECK(record.times.front() == doctest::Approx(0.0));
    CHECK(record.times[1] == doctest::Approx(0.5));
    CHECK(record.times.back() == doctest::Approx(2.0));
  }
}

TEST_CASE("zero Lamb-Dicke coupling leaves internal populations frozen") {
  // with eta=0 the drive is far off-resonant from every internal transition,
  // so populations only wobble at the (Omega/delta)^2 scale
  const TrapParams params{1.0, 0.9, 0.05, 0.0, 2, 4};
  auto initial = initial_composite(2, 0, 4);
  auto record = integrate(initial, 0.0, 400.0, params, {0.01, 100});
  const CompositeDims dims{2, 4};
  for (const auto& psi : record.states) {
    double p_ground = 0.0;
    for (Eigen::Index n = 0; n < dims.fock_dim(); ++n)
      p_ground += std::norm(psi(dims.flat(0, n)));
    CHECK(std::abs(p_ground - 1.0) < 0.01);
  }
}

TEST_CASE("virtual intermediate states stay weakly populated") {
  // singly-excited bitstrings are only reached virtually; their combined
  // population must stay small throughout the evolution
  const TrapParams params{1.0, 0.9, 0.1, 0.1, 2, 8};
  auto initial = initial_composite(2, 0, 8);
  auto record = integrate(initial, 0.0, 300.0, params, {0.01, 200});
  const CompositeDims dims{2, 8};
  for (const auto& psi : record.states) {
    double p_single = 0.0;
    for (Eigen::Index s : {Eigen::Index{1}, Eigen::Index{2}})
      for (Eigen::Index n = 0; n < dims.fock_dim(); ++n)
        p_single += std::norm(psi(dims.flat(s, n)));
    CHECK(p_single < 0.1);
  }
}
