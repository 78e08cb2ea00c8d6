#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "szego/dynamics.hpp"

using namespace szego;
using hardy::HardyField;

namespace {

// Closed form of the transform of Pi(U U* U) for rational U = sum A_j/(x - p_j):
// (1/2pi) int_0^inf V(xi - eta) U(eta) d eta, with the U U* symbol V split at
// zero and every exponential integral done by hand.
Mat nonlinearity_oracle(const hardy::RationalDatum& d, double xi) {
  const cd i(0.0, 1.0);
  Mat out = Mat::Zero(d.rows, d.cols);
  for (std::size_t j = 0; j < d.poles.size(); ++j)
    for (std::size_t l = 0; l < d.poles.size(); ++l) {
      const Mat c = -i * kTwoPi * d.residues[j] * d.residues[l].adjoint() / (d.poles[j] - std::conj(d.poles[l]));
      for (std::size_t m = 0; m < d.poles.size(); ++m) {
        const cd pj = d.poles[j], pm = d.poles[m], ql = std::conj(d.poles[l]);
        const cd diff = pm - pj;
        const cd below = std::abs(diff) < 1e-14 ? xi * std::exp(-i * pj * xi)
                                                : std::exp(-i * pj * xi) * (std::exp(-i * diff * xi) - 1.0) / (-i * diff);
        const cd above = i * std::exp(-i * pm * xi) / (ql - pm);
        out += c * (-i * kTwoPi) * d.residues[m] * (below + above) / kTwoPi;
      }
    }
  return out;
}

}  // namespace

TEST_CASE("nonlinearity oracle reproduces the scalar closed form") {
  const auto d = testing::scalar_benchmark();
  for (double xi : {0.0, 0.5, 3.0}) {
    const cd exact = cd(0.0, -kTwoPi) * std::exp(-xi) * (0.25 + 0.5 * xi);
    CHECK(std::abs(nonlinearity_oracle(d, xi)(0, 0) - exact) < 1e-14);
  }
}

TEST_CASE("nonlinearity matches the closed-form oracle on rational data, at high order") {
  for (std::uint64_t seed : {41, 42}) {
    const auto d = testing::random_datum(seed, 2, 3, 2);
    std::vector<double> rel;
    for (int k : {257, 513}) {
      const FreqGrid g(32.0, k, 6);
      const HardyField n = dynamics::nonlinearity(hardy::rational_to_field(d, g));
      double err = 0.0, scale = 0.0;
      for (int i = 0; i * g.spacing() <= 12.0; ++i) {
        const Mat e = nonlinearity_oracle(d, g.node(i));
        err = std::max(err, (n.sample(i) - e).cwiseAbs().maxCoeff());
        scale = std::max(scale, e.cwiseAbs().maxCoeff());
      }
      rel.push_back(err / scale);
    }
    CHECK(rel[1] < 1e-6);
    CHECK(rel[0] / rel[1] > 64.0);
  }
}

TEST_CASE("zero datum stays zero") {
  dynamics::SimConfig c;
  c.xi_max = 16.0;
  c.points = 64;
  c.dt = 0.01;
  c.t_final = 0.1;
  c.snapshot_stride = 5;
  const auto tr = dynamics::integrate(HardyField(c.grid(), 2, 2), c);
  CHECK(tr.snapshots.size() == 3);
  for (const auto& s : tr.snapshots) CHECK(s.u.data().norm() == 0.0);
  for (double m : tr.mass) CHECK(m == 0.0);
}

TEST_CASE("scalar benchmark follows e^{-it/4} / (x - t/2 + i)") {
  dynamics::SimConfig c;
  c.xi_max = 32.0;
  c.points = 384;
  c.dt = 1e-2;
  c.t_final = 0.5;
  c.snapshot_stride = 50;
  const HardyField u0 = hardy::rational_to_field(testing::scalar_benchmark(), c.grid());
  const auto tr = dynamics::integrate(u0, c);
  const double t = tr.snapshots.back().t;
  double err = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double xi = c.grid().node(k);
    const cd exact = cd(0.0, -kTwoPi) * std::exp(cd(0.0, -t / 4)) * std::exp(-xi * cd(1.0, t / 2));
    err = std::max(err, std::abs(tr.snapshots.back().u(k, 0, 0) - exact));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("transpose covariance is exact to rounding") {
  dynamics::SimConfig c;
  c.xi_max = 16.0;
  c.points = 96;
  c.dt = 5e-3;
  c.t_final = 0.05;
  c.snapshot_stride = 5;
  const HardyField u0 = hardy::rational_to_field(testing::random_datum(43, 2, 3, 2), c.grid());
  CHECK(dynamics::transpose_covariance_check(u0, c) < 1e-12 * std::sqrt(hardy::norm2(u0)));
}

TEST_CASE("RK4 is fourth order") {
  dynamics::SimConfig c;
  c.xi_max = 24.0;
  c.points = 128;
  c.t_final = 0.4;
  const HardyField u0 = hardy::rational_to_field(testing::random_datum(44, 2, 2, 2), c.grid());
  std::vector<HardyField> ends;
  for (double dt : {0.1, 0.05, 0.025}) {
    c.dt = dt;
    c.snapshot_stride = 1000;
    ends.push_back(dynamics::integrate(u0, c).snapshots.back().u);
  }
  const double e1 = std::sqrt(hardy::norm2(ends[0] - ends[1])), e2 = std::sqrt(hardy::norm2(ends[1] - ends[2]));
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("W propagation conserves the probe Gram matrix") {
  dynamics::SimConfig c;
  c.xi_max = 24.0;
  c.points = 128;
  c.dt = 5e-3;
  c.t_final = 0.25;
  c.snapshot_stride = 25;
  const HardyField u0 = hardy::rational_to_field(testing::scalar_benchmark(), c.grid()).base();
  const auto run = dynamics::propagate_W(u0, u0, c);
  CHECK(run.max_gram_drift < 1e-6);
  // W is unitary, so the probe Gram matrix is conserved.
  const Mat g0 = dynamics::probe_gram(u0), g1 = dynamics::probe_gram(run.wx.back());
  CHECK((g1 - g0).norm() < 1e-6 * g0.norm());
}

TEST_CASE("config validation") {
  dynamics::SimConfig c;
  c.dt = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.dt = 0.1;
  c.extra_times = {0.05};
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.extra_times = {0.3};
  CHECK_NOTHROW(c.validate());
}
