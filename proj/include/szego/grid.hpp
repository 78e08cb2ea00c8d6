#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace szego {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform half-line frequency grid xi_k = k*d, k = 0..K-1.
//
// end_order selects the quadrature: 0 is the composite trapezoid rule, q > 0
// adds Gregory end corrections through the q-th difference at both ends. The
// left-end weight profile is exposed separately because Toeplitz and
// resolvent kernels reuse it at interior nodes.
class FreqGrid {
 public:
  static constexpr int kMaxEndOrder = 7;

  FreqGrid() = default;
  FreqGrid(double xi_max, int points, int end_order = 0);

  double xi_max() const { return xi_max_; }
  int points() const { return points_; }
  double spacing() const { return d_; }
  int end_order() const { return q_; }
  double node(int k) const { return k * d_; }

  const std::vector<double>& weights() const { return w_; }
  double weight(int k) const { return w_[k]; }

  // Weight of node j for a rule starting at node 0 on a long interval.
  double end_profile(int j) const { return j < static_cast<int>(profile_.size()) ? profile_[j] : d_; }

  bool operator==(const FreqGrid& o) const {
    return xi_max_ == o.xi_max_ && points_ == o.points_ && q_ == o.q_;
  }
  bool operator!=(const FreqGrid& o) const { return !(*this == o); }

 private:
  double xi_max_ = 0.0;
  int points_ = 0;
  int q_ = 0;
  double d_ = 0.0;
  std::vector<double> w_;
  std::vector<double> profile_;
};

void require_same_grid(const FreqGrid& a, const FreqGrid& b, const char* what);

// Coefficients of the Lagrange polynomial through x = 0..n-1 evaluated at x.
std::vector<double> lagrange_coefficients(int n, double x);

// Product-integration weights c_j with sum_j c_j f(xi_j) ~ int_0^xi_max e^{i z xi} f(xi) d xi.
// f is replaced by its piecewise Lagrange interpolant on max(2, q + 2) nodes
// around each cell and the oscillatory factor is integrated exactly (to
// rounding), so the error does not grow with |Re z| * d. For q = 0 the
// interpolant is piecewise linear.
std::vector<cd> oscillatory_weights(const FreqGrid& grid, cd z);

}  // namespace szego
