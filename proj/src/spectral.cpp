#include "szego/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace szego::spectral {

using operators::half_weights;
using operators::Linearity;
using operators::LowRank;

Side parse_side(const std::string& s) {
  if (s == "rl") return Side::rl;
  if (s == "lr") return Side::lr;
  throw DomainError("unknown side tag: " + s);
}

std::string side_name(Side s) { return s == Side::rl ? "rl" : "lr"; }
Slices side_slices(Side s) { return s == Side::rl ? Slices::columns : Slices::rows; }

Mat SpectralDecomp::vectors() const { return half_w.cwiseInverse().asDiagonal() * sym_vectors; }

SpectralDecomp decompose(const FlatOperator& a, bool psd) {
  if (a.antilinear() || a.in_slices() != a.out_slices() || a.in_len() != a.out_len())
    throw ShapeError("decompose: operator is not a linear endomorphism");
  const Mat s = operators::symmetrized(a);
  const double scale = s.norm();
  if (scale > 0.0 && (s - s.adjoint()).norm() > 1e-8 * scale) throw NumericalError("decompose: operator is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("decompose: eigensolver failed");

  SpectralDecomp d;
  d.grid = a.grid();
  d.slices = a.in_slices();
  d.len = a.in_len();
  d.values = es.eigenvalues();
  d.sym_vectors = es.eigenvectors();
  d.half_w = half_weights(a.grid(), a.in_len());

  if (psd) {
    const double tol = 1e-10 * std::max(1.0, d.values.cwiseAbs().maxCoeff());
    for (int i = 0; i < d.values.size(); ++i) {
      if (d.values[i] < -tol) throw NumericalError("decompose: operator is not positive semidefinite");
      d.values[i] = std::max(d.values[i], 0.0);
    }
  }
  for (int c = 0; c < d.sym_vectors.cols(); ++c) {
    auto v = d.sym_vectors.col(c);
    const double big = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) > 1e-8 * big) {
        v *= std::conj(v[i]) / std::abs(v[i]);
        v[i] = std::abs(v[i]);
        break;
      }
  }
  return d;
}

Mat reconstruct(const SpectralDecomp& d) {
  const Mat s = d.sym_vectors * d.values.cast<cd>().asDiagonal() * d.sym_vectors.adjoint();
  return operators::desymmetrized(s, d.grid, d.len);
}

FlatOperator propagator(const SpectralDecomp& d, double t) {
  const Eigen::VectorXcd ph = (cd(0.0, -t) * d.values.cast<cd>()).array().exp();
  const Mat s = d.sym_vectors * ph.asDiagonal() * d.sym_vectors.adjoint();
  return FlatOperator(operators::desymmetrized(s, d.grid, d.len), Linearity::linear, d.grid, d.slices, d.len,
                      d.slices, d.len);
}

Mat apply_propagator(const SpectralDecomp& d, double t, const Mat& xs) {
  const Eigen::VectorXcd ph = (cd(0.0, -t) * d.values.cast<cd>()).array().exp();
  const Mat c = d.sym_vectors.adjoint() * (d.half_w.asDiagonal() * xs);
  return d.half_w.cwiseInverse().asDiagonal() * (d.sym_vectors * (ph.asDiagonal() * c));
}

cd phi(double delta, double t) {
  const double a = std::abs(delta);
  if (a < 1e-9) return t;
  if (a < 1e-6) return cd(t, -0.5 * t * t * delta);
  return (1.0 - std::exp(cd(0.0, -t * delta))) / cd(0.0, delta);
}

FlatOperator double_hankel(const HardyField& u, Side side) {
  return side == Side::rl ? operators::double_hankel_rl(u) : operators::double_hankel_lr(u);
}

LowRank m_factors(const HardyField& u, Side side) {
  return side == Side::rl ? operators::m_rl_factors(u) : operators::m_lr_factors(u);
}

LowRank L_factors(const SpectralDecomp& d, const LowRank& m, double t, double rank_tol) {
  const Eigen::VectorXd& dw = d.half_w;
  const Mat b1 = dw.asDiagonal() * m.y;
  const Mat b2 = dw.cwiseInverse().asDiagonal() * m.z;
  const Mat g1 = d.sym_vectors.adjoint() * b1;
  const Mat g2 = d.sym_vectors.adjoint() * b2;

  const double top = d.values.size() ? d.values.maxCoeff() : 0.0;
  std::vector<int> sig;
  for (int a = 0; a < d.values.size(); ++a)
    if (top > 0.0 && d.values[a] > rank_tol * top) sig.push_back(a);
  const int s = static_cast<int>(sig.size()), r = static_cast<int>(m.y.cols()), n = static_cast<int>(b1.rows());

  Mat qs(n, s), g1s(s, r), g2s(s, r);
  for (int i = 0; i < s; ++i) {
    qs.col(i) = d.sym_vectors.col(sig[i]);
    g1s.row(i) = g1.row(sig[i]);
    g2s.row(i) = g2.row(sig[i]);
  }
  Mat x1(n, s + r), x2(n, s + r);
  x1 << qs, b1 - qs * g1s;
  x2 << qs, b2 - qs * g2s;

  Mat mid = Mat::Zero(s + r, s + r);
  const Mat c = g1s * g2s.adjoint();
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) mid(a, b) = c(a, b) * phi(d.values[sig[a]] - d.values[sig[b]], t);
    mid.block(a, s, 1, r) = phi(d.values[sig[a]], t) * g1s.row(a);
    mid.block(s, a, r, 1) = g2s.row(a).adjoint() * phi(-d.values[sig[a]], t);
  }
  mid.block(s, s, r, r) = Mat::Identity(r, r) * t;
  mid /= kTwoPi;

  return LowRank{dw.cwiseInverse().asDiagonal() * (x1 * mid), dw.asDiagonal() * x2};
}

FlatOperator L_operator(const HardyField& u0, double t, Side side) {
  const SpectralDecomp d = decompose(double_hankel(u0, side));
  const LowRank f = L_factors(d, m_factors(u0.base(), side), t);
  return FlatOperator(f.y * f.z.adjoint(), Linearity::linear, d.grid, d.slices, d.len, d.slices, d.len);
}

FlatOperator L_operator_full(const SpectralDecomp& d, const LowRank& m, double t) {
  const Eigen::VectorXd& dw = d.half_w;
  const Mat g1 = d.sym_vectors.adjoint() * (dw.asDiagonal() * m.y);
  const Mat g2 = d.sym_vectors.adjoint() * (dw.cwiseInverse().asDiagonal() * m.z);
  Mat c = g1 * g2.adjoint();
  for (int a = 0; a < c.rows(); ++a)
    for (int b = 0; b < c.cols(); ++b) c(a, b) *= phi(d.values[a] - d.values[b], t);
  const Mat s = d.sym_vectors * c * d.sym_vectors.adjoint() / kTwoPi;
  return FlatOperator(operators::desymmetrized(s, d.grid, d.len), Linearity::linear, d.grid, d.slices, d.len,
                      d.slices, d.len);
}

FlatOperator L_quadrature(const SpectralDecomp& d, const LowRank& m, double t, int nodes) {
  const Eigen::VectorXd& dw = d.half_w;
  const Mat g1 = d.sym_vectors.adjoint() * (dw.asDiagonal() * m.y);
  const Mat g2 = d.sym_vectors.adjoint() * (dw.cwiseInverse().asDiagonal() * m.z);
  const int n = static_cast<int>(g1.rows()), r = static_cast<int>(g1.cols());
  const int chunk = 256;
  Mat s = Mat::Zero(n, n);
  for (int start = 0; start < nodes; start += chunk) {
    const int cnt = std::min(chunk, nodes - start);
    Mat e1(n, cnt * r), e2(n, cnt * r);
    for (int i = 0; i < cnt; ++i) {
      const double tau = (start + i + 0.5) * t / nodes;
      const Eigen::VectorXcd ph = (cd(0.0, -tau) * d.values.cast<cd>()).array().exp();
      e1.middleCols(i * r, r) = ph.asDiagonal() * g1;
      e2.middleCols(i * r, r) = ph.asDiagonal() * g2;
    }
    const Mat p1 = d.sym_vectors * e1, p2 = d.sym_vectors * e2;
    s += p1 * p2.adjoint();
  }
  s *= t / nodes / kTwoPi;
  return FlatOperator(operators::desymmetrized(s, d.grid, d.len), Linearity::linear, d.grid, d.slices, d.len,
                      d.slices, d.len);
}

namespace {

double rel_change(double now, double ref) {
  return ref != 0.0 ? std::abs(now - ref) / std::abs(ref) : std::abs(now);
}

}  // namespace

ConservedSeries conserved_report(const dynamics::Trajectory& traj, Side side, double eigen_floor) {
  if (traj.snapshots.empty()) throw DomainError("conserved_report: empty trajectory");
  ConservedSeries c;
  for (const auto& snap : traj.snapshots) {
    const FlatOperator a = double_hankel(snap.u.with_tail(), side);
    const Mat s = operators::symmetrized(a);
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.rbegin(), ev.rend());
    double tr = 0.0, tr2 = 0.0;
    for (double v : ev) {
      tr += v;
      tr2 += v * v;
    }
    c.t.push_back(snap.t);
    c.mass.push_back(hardy::norm2(snap.u));
    c.trace.push_back(tr);
    c.trace_sq.push_back(tr2);
    c.eigenvalues.push_back(std::move(ev));
  }
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    c.mass_drift = std::max(c.mass_drift, rel_change(c.mass[i], c.mass[0]));
    c.trace_drift = std::max(c.trace_drift, rel_change(c.trace[i], c.trace[0]));
    c.trace_sq_drift = std::max(c.trace_sq_drift, rel_change(c.trace_sq[i], c.trace_sq[0]));
    for (std::size_t a = 0; a < c.eigenvalues[0].size() && c.eigenvalues[0][a] > eigen_floor; ++a)
      c.eigen_drift = std::max(c.eigen_drift, rel_change(c.eigenvalues[i][a], c.eigenvalues[0][a]));
  }
  return c;
}

double lax_residual(const HardyField& before, const HardyField& mid, const HardyField& after, double h, Side side,
                    const hardy::SymbolField* symbol_override) {
  const FlatOperator ap = double_hankel(after.with_tail(), side);
  const FlatOperator am = double_hankel(before.with_tail(), side);
  const FlatOperator a0 = double_hankel(mid.with_tail(), side);
  const HardyField u = mid.base();
  FlatOperator t;
  if (side == Side::lr)
    t = operators::toeplitz_left(symbol_override ? *symbol_override : operators::symbol_product_adjoint(u, u));
  else
    t = operators::toeplitz_right(symbol_override ? *symbol_override : operators::symbol_product(u, u));
  // A T is evaluated as (T A)^dagger: T's kink correction acts along its
  // column index, and the symbol is Hermitian, so both products stay high order.
  const FlatOperator ta = operators::compose(t, a0);
  const FlatOperator comm = operators::adjoint(ta) - ta;
  const FlatOperator r = cd(0.5 / h) * (ap - am) - cd(0.0, 1.0) * comm;
  return operators::weighted_norm(r);
}

double lax_residual(const dynamics::Trajectory& traj, double t, double h, Side side) {
  const auto* b = traj.at(t - h);
  const auto* m = traj.at(t);
  const auto* a = traj.at(t + h);
  if (!b || !m || !a) throw DomainError("lax_residual: trajectory lacks snapshots at t and t +- h");
  return lax_residual(b->u, m->u, a->u, h, side);
}

}  // namespace szego::spectral
