#include "szego/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace szego {

namespace {

// Gregory coefficients g_m, m >= 1: integral = trapezoid + d * sum_m g_m
// Delta^m f_0 at the left end. g_m = -G_{m+1}, where G_n are the
// coefficients of x / ln(1 + x).
std::vector<double> gregory_coefficients(int q) {
  std::vector<double> big(q + 2, 0.0);
  big[0] = 1.0;
  for (int n = 1; n < q + 2; ++n)
    for (int k = 1; k <= n; ++k) big[n] -= big[n - k] * (k % 2 ? -1.0 : 1.0) / (k + 1);
  std::vector<double> g(q);
  for (int m = 1; m <= q; ++m) g[m - 1] = -big[m + 1];
  return g;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

FreqGrid::FreqGrid(double xi_max, int points, int end_order)
    : xi_max_(xi_max), points_(points), q_(end_order) {
  if (!(xi_max > 0.0) || !std::isfinite(xi_max)) throw DomainError("grid: xi_max must be positive");
  if (end_order < 0 || end_order > kMaxEndOrder) throw DomainError("grid: end order out of range");
  if (points < 2 * end_order + 4) throw DomainError("grid: too few points for the requested end order");
  d_ = xi_max / (points - 1);

  const std::vector<double> gc = gregory_coefficients(q_);
  profile_.assign(q_ + 1, d_);
  profile_[0] = 0.5 * d_;
  for (int m = 1; m <= q_; ++m)
    for (int i = 0; i <= m; ++i)
      profile_[i] += d_ * gc[m - 1] * ((m - i) % 2 ? -1.0 : 1.0) * binomial(m, i);

  w_.assign(points_, d_);
  for (int j = 0; j <= q_; ++j) {
    w_[j] += profile_[j] - d_;
    w_[points_ - 1 - j] += profile_[j] - d_;
  }
}

void require_same_grid(const FreqGrid& a, const FreqGrid& b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": grid mismatch");
}

std::vector<double> lagrange_coefficients(int n, double x) {
  std::vector<double> c(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m)
      if (m != i) c[i] *= (x - m) / (i - m);
  return c;
}

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);
    x[n - 1 - i] = 0.5 * (1.0 + t);
    w[i] = w[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

std::vector<cd> oscillatory_weights(const FreqGrid& grid, cd z) {
  const int k = grid.points(), s = std::max(2, grid.end_order() + 2);
  const double d = grid.spacing();
  // Enough Gauss points that e^{i z xi} is resolved inside a cell.
  const int ng = 12 + static_cast<int>(std::ceil(2.0 * std::abs(z) * d));
  std::vector<double> gx, gw;
  gauss_legendre(ng, gx, gw);
  std::vector<cd> c(k, 0.0);
  std::vector<double> basis(s);
  for (int cell = 0; cell + 1 < k; ++cell) {
    const int first = std::clamp(cell - (s / 2 - 1), 0, k - s);
    const cd phase = std::exp(cd(0.0, 1.0) * z * grid.node(cell));
    for (int g = 0; g < ng; ++g) {
      const double u = cell + gx[g];  // position in node units
      const cd e = phase * std::exp(cd(0.0, 1.0) * z * (gx[g] * d)) * (gw[g] * d);
      basis = lagrange_coefficients(s, u - first);
      for (int i = 0; i < s; ++i) c[first + i] += e * basis[i];
    }
  }
  return c;
}

}  // namespace szego
