#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "szego/hardy.hpp"

using namespace szego;
using hardy::HardyField;

TEST_CASE("rational field samples match -2 pi i sum A_j e^{-i p_j xi}") {
  const FreqGrid g(16.0, 129, 0);
  const auto d = testing::random_datum(3, 2, 3, 2);
  const HardyField u = hardy::rational_to_field(d, g);
  CHECK(u.has_tail());
  for (int k : {0, 7, 128, 200}) {
    Mat e = Mat::Zero(2, 3);
    for (std::size_t j = 0; j < d.poles.size(); ++j)
      e += cd(0.0, -kTwoPi) * std::exp(cd(0.0, -1.0) * d.poles[j] * (k * g.spacing())) * d.residues[j];
    CHECK((u.sample(k) - e).norm() < 1e-12 * std::max(1.0, e.norm()));
  }
}

TEST_CASE("Plancherel: ||1/(x+i)||^2 = pi") {
  const FreqGrid g(32.0, 513, 6);
  const HardyField u = hardy::rational_to_field(testing::scalar_benchmark(), g).base();
  CHECK(hardy::norm2(u) == doctest::Approx(kPi).epsilon(1e-8));
}

TEST_CASE("inner product is Hermitian and linear") {
  const FreqGrid g(8.0, 64, 2);
  const HardyField f = testing::random_field(g, 2, 2, 1), h = testing::random_field(g, 2, 2, 2);
  CHECK(std::abs(hardy::inner(f, h) - std::conj(hardy::inner(h, f))) < 1e-12);
  const cd a(0.3, -1.2);
  CHECK(std::abs(hardy::inner(a * f, h) - a * hardy::inner(f, h)) < 1e-12);
  CHECK(hardy::norm2(f) > 0.0);
}

TEST_CASE("poisson_eval approaches the rational value at second order (trapezoid)") {
  const auto d = testing::random_datum(5, 2, 2, 2);
  const cd z(0.7, 0.5);
  const Mat exact = hardy::rational_value(d, z);
  double err[2];
  int i = 0;
  for (int k : {257, 513}) {
    const HardyField u = hardy::rational_to_field(d, FreqGrid(40.0, k, 0));
    err[i++] = (hardy::poisson_eval(u, z) - exact).cwiseAbs().maxCoeff();
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.1));
  const HardyField u6 = hardy::rational_to_field(d, FreqGrid(40.0, 513, 6));
  CHECK((hardy::poisson_eval(u6, z) - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("poisson_eval is holomorphic: d/dy = i d/dx") {
  const FreqGrid g(32.0, 512, 6);
  const HardyField u = hardy::rational_to_field(testing::random_datum(9, 2, 2, 2), g);
  const cd z(0.3, 1.0);
  const double h = 1e-4;
  const Mat dx = (hardy::poisson_eval(u, z + h) - hardy::poisson_eval(u, z - h)) / (2 * h);
  const Mat dy = (hardy::poisson_eval(u, z + cd(0, h)) - hardy::poisson_eval(u, z - cd(0, h))) / (2 * h);
  CHECK((dy - cd(0.0, 1.0) * dx).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("boundary trace tends to U(x) as y -> 0") {
  const FreqGrid g(64.0, 2049, 6);
  const auto d = testing::scalar_benchmark();
  const HardyField u = hardy::rational_to_field(d, g);
  const std::vector<double> xs{-1.0, 0.0, 2.0};
  double prev = 1e300;
  for (double y : {0.4, 0.2, 0.1}) {
    const auto tr = hardy::boundary_trace(u, y, xs);
    double e = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) e = std::max(e, std::abs(tr[i](0, 0) - 1.0 / (xs[i] + cd(0, 1))));
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("transpose is an involution and zero datum gives a zero field") {
  const FreqGrid g(8.0, 64, 0);
  const HardyField f = testing::random_field(g, 2, 3, 4);
  CHECK((hardy::transpose_field(hardy::transpose_field(f)).data() - f.data()).norm() == 0.0);
  CHECK(hardy::transpose_field(f).rows() == 3);
  hardy::RationalDatum z;
  z.rows = 2;
  z.cols = 2;
  CHECK(hardy::norm2(hardy::rational_to_field(z, g)) == 0.0);
}

TEST_CASE("datum validation and JSON round trip") {
  hardy::RationalDatum d = testing::random_datum(2, 1, 2, 2);
  const hardy::RationalDatum r = hardy::parse_rational_json(hardy::rational_to_json(d));
  REQUIRE(r.poles.size() == 2);
  CHECK(r.poles[1] == d.poles[1]);
  CHECK((r.residues[0] - d.residues[0]).norm() == 0.0);
  d.poles[0] = cd(0.0, 0.5);
  CHECK_THROWS(d.validate());
}

TEST_CASE("embed then project is the identity") {
  const FreqGrid g(8.0, 64, 0);
  const HardyField f = testing::random_field(g, 2, 2, 8);
  CHECK((hardy::szego_project(hardy::embed(f)).base().data() - f.data()).norm() < 1e-14);
}

TEST_CASE("field CSV has one line per node and entry") {
  const FreqGrid g(8.0, 16, 0);
  std::ostringstream os;
  hardy::write_field_csv(os, testing::random_field(g, 2, 1, 1));
  const std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 16 * 2);
}
