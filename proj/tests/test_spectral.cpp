#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "szego/dynamics.hpp"
#include "szego/spectral.hpp"

using namespace szego;
using hardy::HardyField;
using spectral::Side;

TEST_CASE("phi has the right small-delta limit") {
  CHECK(std::abs(spectral::phi(0.0, 0.7) - 0.7) < 1e-15);
  const double d = 0.3, t = 1.1;
  const cd exact = (1.0 - std::exp(cd(0.0, -t * d))) / cd(0.0, d);
  CHECK(std::abs(spectral::phi(d, t) - exact) < 1e-15);
  CHECK(std::abs(spectral::phi(1e-9, t) - cd(t, -0.5e-9 * t * t)) < 1e-15);
}

TEST_CASE("double Hankel of 1/(x+i) is rank one with eigenvalue 1/4") {
  const HardyField u = hardy::rational_to_field(testing::scalar_benchmark(), FreqGrid(32.0, 512, 6));
  for (Side s : {Side::rl, Side::lr}) {
    const auto d = spectral::decompose(spectral::double_hankel(u, s));
    const int n = static_cast<int>(d.values.size());
    CHECK(d.values[n - 1] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(d.values[n - 2] < 1e-8);
  }
}

TEST_CASE("rank of the double Hankel operator equals the number of poles times dimension") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(31, 2, 2, 2), FreqGrid(32.0, 256, 6));
  const auto d = spectral::decompose(spectral::double_hankel(u, Side::rl));
  const double top = d.values.maxCoeff();
  int rank = 0;
  for (int i = 0; i < d.values.size(); ++i) rank += d.values[i] > 1e-9 * top;
  CHECK(rank == 4);
}

TEST_CASE("eigenvectors are orthonormal in the weighted product and reconstruct the operator") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(32, 2, 3, 2), FreqGrid(16.0, 96, 6));
  const auto a = spectral::double_hankel(u, Side::lr);
  const auto d = spectral::decompose(a);
  CHECK((d.sym_vectors.adjoint() * d.sym_vectors - Mat::Identity(d.values.size(), d.values.size())).norm() < 1e-10);
  CHECK((spectral::reconstruct(d) - a.matrix()).norm() < 1e-10 * a.matrix().norm());
}

TEST_CASE("propagator is unitary and a group in t") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(33, 2, 2, 2), FreqGrid(16.0, 64, 6));
  const auto d = spectral::decompose(spectral::double_hankel(u, Side::rl));
  const auto p1 = spectral::propagator(d, 0.4), p2 = spectral::propagator(d, 0.6), p = spectral::propagator(d, 1.0);
  CHECK((operators::compose(p1, p2).matrix() - p.matrix()).norm() < 1e-10);
  const Mat s = operators::symmetrized(p);
  CHECK((s.adjoint() * s - Mat::Identity(s.rows(), s.cols())).norm() < 1e-10);
}

TEST_CASE("decompose rejects non-Hermitian and indefinite input") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(34, 1, 1, 1), FreqGrid(16.0, 32, 0));
  auto a = spectral::double_hankel(u, Side::rl);
  auto b = a;
  b.matrix()(0, 1) += 1.0;
  CHECK_THROWS_AS(spectral::decompose(b), NumericalError);
  CHECK_THROWS_AS(spectral::decompose(cd(-1.0) * a), NumericalError);
  CHECK_NOTHROW(spectral::decompose(cd(-1.0) * a, false));
}

TEST_CASE("closed-form L(t) agrees with tau quadrature; L(0) = 0") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(35, 2, 2, 2), FreqGrid(24.0, 128, 6));
  for (Side s : {Side::rl, Side::lr}) {
    const auto d = spectral::decompose(spectral::double_hankel(u, s));
    const auto m = spectral::m_factors(u, s);
    const auto full = spectral::L_operator_full(d, m, 0.8);
    const auto quad = spectral::L_quadrature(d, m, 0.8, 512);
    CHECK(operators::weighted_norm(full - quad) < 1e-8 * operators::weighted_norm(quad));
    const auto f = spectral::L_factors(d, m, 0.8);
    CHECK((f.y * f.z.adjoint() - full.matrix()).norm() < 1e-10 * full.matrix().norm());
    CHECK(spectral::L_operator_full(d, m, 0.0).matrix().norm() == 0.0);
  }
}

TEST_CASE("L(t) is positive for t > 0 and negative for t < 0") {
  const HardyField u = hardy::rational_to_field(testing::random_datum(36, 1, 2, 2), FreqGrid(24.0, 128, 6));
  for (Side s : {Side::rl, Side::lr}) {
    const auto d = spectral::decompose(spectral::double_hankel(u, s));
    const auto m = spectral::m_factors(u, s);
    for (double t : {0.8, -0.8}) {
      const Mat l = spectral::L_operator_full(d, m, t).matrix();
      const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Mat>(l, false).eigenvalues();
      const double scale = ev.cwiseAbs().maxCoeff();
      REQUIRE(scale > 0.0);
      for (int i = 0; i < ev.size(); ++i) {
        CHECK(std::abs(ev[i].imag()) < 1e-8 * scale);
        CHECK(std::copysign(1.0, t) * ev[i].real() > -1e-8 * scale);
      }
    }
  }
}

TEST_CASE("conserved report on a short run: isospectral, mass conserved") {
  dynamics::SimConfig c;
  c.xi_max = 32.0;
  c.points = 512;
  c.dt = 2e-3;
  c.t_final = 0.2;
  c.snapshot_stride = 50;
  const HardyField u0 = hardy::rational_to_field(testing::random_datum(36, 2, 2, 2), c.grid());
  const auto tr = dynamics::integrate(u0, c);
  for (Side s : {Side::rl, Side::lr}) {
    const auto r = spectral::conserved_report(tr, s);
    CHECK(r.eigen_drift < 1e-6);
    CHECK(r.mass_drift < 1e-8);
    CHECK(r.eigenvalues.size() == tr.snapshots.size());
  }
}

TEST_CASE("Lax residual contracts at second order in h") {
  dynamics::SimConfig c;
  c.xi_max = 24.0;
  c.points = 192;
  c.dt = 1e-3;
  c.t_final = 0.4;
  c.extra_times = {0.18, 0.19, 0.21, 0.22};
  const HardyField u0 = hardy::rational_to_field(testing::random_datum(37, 1, 2, 1), c.grid());
  const auto tr = dynamics::integrate(u0, c);
  for (Side s : {Side::rl, Side::lr}) {
    const double a = spectral::lax_residual(tr, 0.2, 0.02, s), b = spectral::lax_residual(tr, 0.2, 0.01, s);
    CHECK(a / b == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("side tags") {
  CHECK(spectral::parse_side("rl") == Side::rl);
  CHECK(spectral::side_name(Side::lr) == "lr");
  CHECK_THROWS_AS(spectral::parse_side("up"), DomainError);
}
