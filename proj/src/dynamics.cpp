#include "szego/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace szego::dynamics {

using operators::apply_toeplitz_left;
using operators::apply_toeplitz_right;
using operators::symbol_product;
using operators::symbol_product_adjoint;

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw DomainError("config: dt must be positive");
  if (!(t_final >= 0.0)) throw DomainError("config: t_final must be nonnegative");
  if (snapshot_stride < 1) throw DomainError("config: snapshot stride must be positive");
  if (pad_factor < 2) throw DomainError("config: pad factor below 2 aliases the cubic product");
  for (double t : extra_times) {
    const double n = t / dt;
    if (t < 0.0 || t > t_final + 1e-12 || std::abs(n - std::round(n)) > 1e-6)
      throw DomainError("config: snapshot time is not a step multiple inside [0, t_final]");
  }
  (void)grid();
}

const Snapshot* Trajectory::at(double t) const {
  for (const auto& s : snapshots)
    if (std::abs(s.t - t) < 1e-9) return &s;
  return nullptr;
}

HardyField nonlinearity(const HardyField& u, int pad_factor) {
  if (pad_factor < 2) throw DomainError("nonlinearity: pad factor below 2 aliases the cubic product");
  const HardyField b = u.base();
  HardyField r = apply_toeplitz_right(symbol_product(b, b, pad_factor), b, pad_factor);
  r += apply_toeplitz_left(symbol_product_adjoint(b, b, pad_factor), b, pad_factor);
  r *= 0.5;
  return r;
}

namespace {

HardyField rhs(const HardyField& u, int pad) {
  HardyField n = nonlinearity(u, pad);
  n *= cd(0.0, -1.0);
  return n;
}

void check_finite(const HardyField& u, double t) {
  if (!u.data().allFinite()) throw NumericalError("integration produced non-finite values near t = " + std::to_string(t));
}

std::set<long long> snapshot_steps(const SimConfig& c, long long nsteps) {
  std::set<long long> s;
  for (long long n = 0; n <= nsteps; n += c.snapshot_stride) s.insert(n);
  s.insert(nsteps);
  for (double t : c.extra_times) s.insert(std::llround(t / c.dt));
  return s;
}

}  // namespace

HardyField step_rk4(const HardyField& u, double dt, int pad_factor) {
  const HardyField k1 = rhs(u, pad_factor);
  const HardyField k2 = rhs(u + cd(0.5 * dt) * k1, pad_factor);
  const HardyField k3 = rhs(u + cd(0.5 * dt) * k2, pad_factor);
  const HardyField k4 = rhs(u + cd(dt) * k3, pad_factor);
  return u + cd(dt / 6.0) * (k1 + cd(2.0) * k2 + cd(2.0) * k3 + k4);
}

Trajectory integrate(const HardyField& u0, const SimConfig& config) {
  config.validate();
  require_same_grid(config.grid(), u0.grid(), "integrate");
  const auto start = std::chrono::steady_clock::now();
  Trajectory tr;
  tr.config = config;
  const long long nsteps = std::llround(config.t_final / config.dt);
  const auto snaps = snapshot_steps(config, nsteps);
  HardyField u = u0.base();
  for (long long n = 0;; ++n) {
    if (snaps.count(n)) {
      tr.snapshots.push_back({n * config.dt, u});
      tr.mass.push_back(hardy::norm2(u));
    }
    if (n == nsteps) break;
    u = step_rk4(u, config.dt, config.pad_factor);
    check_finite(u, (n + 1) * config.dt);
  }
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

Mat probe_gram(const HardyField& x) {
  const Mat xs = operators::slice_matrix(x, operators::Slices::rows);
  const Eigen::VectorXd d = operators::half_weights(x.grid(), x.cols());
  const Mat y = d.asDiagonal() * xs;
  return y.adjoint() * y;
}

namespace {

Mat hermitian_power(const Mat& g, double p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.adjoint()));
  const double floor = 1e-14 * std::max(es.eigenvalues().maxCoeff(), 0.0);
  Eigen::VectorXcd v(es.eigenvalues().size());
  for (int i = 0; i < v.size(); ++i) {
    const double e = es.eigenvalues()[i];
    v[i] = e > floor ? std::pow(e, p) : 0.0;
  }
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

WRun propagate_W(const HardyField& u0, const HardyField& probes, const SimConfig& config,
                 double correction_threshold) {
  config.validate();
  require_same_grid(config.grid(), u0.grid(), "propagate_W");
  require_same_grid(u0.grid(), probes.grid(), "propagate_W");
  if (probes.cols() != u0.cols()) throw ShapeError("propagate_W: probe rows must match the field's row length");
  const int pad = config.pad_factor;
  const cd mi(0.0, -1.0);

  // Stage derivative of (U, X): both use the U* U symbol of the stage value.
  auto stage = [&](const HardyField& u, const HardyField& x, HardyField& du, HardyField& dx) {
    const auto left = symbol_product_adjoint(u, u, pad);
    du = apply_toeplitz_right(symbol_product(u, u, pad), u, pad);
    du += apply_toeplitz_left(left, u, pad);
    du *= 0.5 * mi;
    dx = apply_toeplitz_left(left, x, pad);
    dx *= mi;
  };

  WRun run;
  const long long nsteps = std::llround(config.t_final / config.dt);
  const auto snaps = snapshot_steps(config, nsteps);
  HardyField u = u0.base(), x = probes.base();
  const Mat g0 = probe_gram(x);
  const Mat g0_half = hermitian_power(g0, 0.5);
  const double g0n = g0.norm();
  const double h = config.dt;
  HardyField du1, du2, du3, du4, dx1, dx2, dx3, dx4;
  for (long long n = 0;; ++n) {
    if (snaps.count(n)) {
      run.times.push_back(n * h);
      run.u.push_back(u);
      run.wx.push_back(x);
    }
    if (n == nsteps) break;
    stage(u, x, du1, dx1);
    stage(u + cd(0.5 * h) * du1, x + cd(0.5 * h) * dx1, du2, dx2);
    stage(u + cd(0.5 * h) * du2, x + cd(0.5 * h) * dx2, du3, dx3);
    stage(u + cd(h) * du3, x + cd(h) * dx3, du4, dx4);
    u += cd(h / 6.0) * (du1 + cd(2.0) * du2 + cd(2.0) * du3 + du4);
    x += cd(h / 6.0) * (dx1 + cd(2.0) * dx2 + cd(2.0) * dx3 + dx4);
    check_finite(u, (n + 1) * h);
    check_finite(x, (n + 1) * h);

    const Mat g = probe_gram(x);
    const double drift = g0n > 0.0 ? (g - g0).norm() / g0n : 0.0;
    run.max_gram_drift = std::max(run.max_gram_drift, drift);
    if (drift > correction_threshold) {
      const Mat fix = hermitian_power(g, -0.5) * g0_half;
      const Mat xs = operators::slice_matrix(x, operators::Slices::rows) * fix;
      x = operators::field_from_slices(xs, x.grid(), operators::Slices::rows, x.cols());
      ++run.corrections;
    }
  }
  return run;
}

double transpose_covariance_check(const HardyField& u0, const SimConfig& config) {
  const Trajectory a = integrate(u0, config);
  const Trajectory b = integrate(hardy::transpose_field(u0), config);
  double gap = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const HardyField d = hardy::transpose_field(a.snapshots[i].u) - b.snapshots[i].u;
    gap = std::max(gap, std::sqrt(hardy::norm2(d)));
  }
  return gap;
}

}  // namespace szego::dynamics
