#include "szego/operators.hpp"

#include <cmath>

#include "szego/fft.hpp"

namespace szego::operators {

using fft::BlockSeq;

namespace {

BlockSeq to_seq(const HardyField& f, bool weighted, bool base_only) {
  BlockSeq s;
  s.rows = f.rows();
  s.cols = f.cols();
  const int n = base_only ? f.grid().points() : f.nodes();
  s.data = f.data().topRows(n);
  if (weighted)
    for (int k = 0; k < n; ++k) s.data.row(k) *= f.grid().weight(k);
  return s;
}

void require_tail(const HardyField& u, const char* what) {
  if (!u.has_tail()) throw ShapeError(std::string(what) + ": field lacks the extended tail");
}

// The two branches of a correlation symbol: pos from indices 0..K-1, neg
// from indices 0..-(K-1) of the convolution.
SymbolField branches(const FreqGrid& g, const BlockSeq& pos, const BlockSeq& neg) {
  const int k = g.points();
  SymbolField v(g, pos.rows, pos.cols);
  v.pos() = pos.data / kTwoPi;
  for (int j = 0; j < k; ++j) v.neg().row(j) = neg.data.row(k - 1 - j) / kTwoPi;
  return v;
}

}  // namespace

SymbolField symbol_product(const HardyField& u, const HardyField& w, int pad_factor) {
  require_same_grid(u.grid(), w.grid(), "symbol_product");
  if (u.cols() != w.cols()) throw ShapeError("symbol_product: shape mismatch");
  const int k = u.grid().points();
  const BlockSeq pos = fft::block_convolve(to_seq(u, false, false), fft::reverse_adjoint(to_seq(w, true, true)), 0, k,
                                           pad_factor);
  const BlockSeq neg = fft::block_convolve(to_seq(u, true, true), fft::reverse_adjoint(to_seq(w, false, false)),
                                           -(k - 1), k, pad_factor);
  return branches(u.grid(), pos, neg);
}

SymbolField symbol_product_adjoint(const HardyField& u, const HardyField& w, int pad_factor) {
  require_same_grid(u.grid(), w.grid(), "symbol_product_adjoint");
  if (u.rows() != w.rows()) throw ShapeError("symbol_product_adjoint: shape mismatch");
  const int k = u.grid().points();
  const BlockSeq pos = fft::block_convolve(fft::reverse_adjoint(to_seq(u, true, true)), to_seq(w, false, false), 0, k,
                                           pad_factor);
  const BlockSeq neg = fft::block_convolve(fft::reverse_adjoint(to_seq(u, false, false)), to_seq(w, true, true),
                                           -(k - 1), k, pad_factor);
  return branches(u.grid(), pos, neg);
}

SymbolField hardy_symbol(const HardyField& u) { return hardy::embed(u); }

SymbolField adjoint_symbol(const SymbolField& v) {
  SymbolField a(v.grid(), v.cols(), v.rows());
  const SymbolField t = hardy::transpose_symbol(v);
  a.pos() = t.neg().conjugate();
  a.neg() = t.pos().conjugate();
  return a;
}

FlatOperator hankel_right(const HardyField& u) {
  require_tail(u, "hankel_right");
  const FreqGrid& g = u.grid();
  const int k = g.points(), m = u.rows(), n = u.cols();
  Mat a(k * m, k * n);
  for (int r = 0; r < k; ++r)
    for (int l = 0; l < k; ++l) {
      const double c = g.weight(l) / kTwoPi;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(r * m + i, l * n + j) = c * u(r + l, i, j);
    }
  return FlatOperator(std::move(a), Linearity::antilinear, g, Slices::rows, n, Slices::columns, m);
}

FlatOperator hankel_left(const HardyField& u) {
  require_tail(u, "hankel_left");
  const FreqGrid& g = u.grid();
  const int k = g.points(), m = u.rows(), n = u.cols();
  Mat a(k * n, k * m);
  for (int r = 0; r < k; ++r)
    for (int l = 0; l < k; ++l) {
      const double c = g.weight(l) / kTwoPi;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) a(r * n + j, l * m + i) = c * u(l + r, i, j);
    }
  return FlatOperator(std::move(a), Linearity::antilinear, g, Slices::columns, m, Slices::rows, n);
}

namespace {

// Quadrature of (1/2pi) int_0^inf V(xi_k - eta) G(eta) d eta. The integrand
// has a kink (or jump) at eta = xi_k, which the end-corrected rule cannot see
// when it sits inside the end stencil. Each row is split at xi_k: the left
// branch of V is continued past xi_k by Lagrange extrapolation, so the full
// rule applies to a smooth integrand, and the remainder on [xi_k, inf) gets its
// own end correction. Only the q + 1 nodes after xi_k change.
struct ToeplitzKernel {
  FreqGrid g;
  int rows = 0, cols = 0;
  std::vector<Mat> base;  // index n + K - 1, n in [-(K-1), K-1]; includes 1/2pi
  std::vector<Mat> e;     // e[0]: jump at zero; e[j]: extrapolated minus actual; include 1/2pi

  double coeff(int k, int j) const {
    if (j == 0) return g.end_profile(k) - g.end_profile(0) - 0.5 * g.weight(k);
    return g.end_profile(k + j) - g.end_profile(j);
  }
};

ToeplitzKernel make_kernel(const SymbolField& v, bool kink_correction = true) {
  ToeplitzKernel t;
  t.g = v.grid();
  t.rows = v.rows();
  t.cols = v.cols();
  const int k = t.g.points(), q = t.g.end_order();
  t.base.resize(2 * k - 1);
  for (int n = -(k - 1); n < k; ++n) t.base[n + k - 1] = v.sample(n) / kTwoPi;

  if (!kink_correction) return t;
  const int npts = std::min(q + 4, k);
  t.e.resize(q + 1);
  t.e[0] = (v.pos_sample(0) - v.neg_sample(0)) / kTwoPi;
  for (int j = 1; j <= q; ++j) {
    Mat ext = Mat::Zero(t.rows, t.cols);
    const std::vector<double> c = lagrange_coefficients(npts, -j);
    for (int i = 0; i < npts; ++i) ext += c[i] * v.pos_sample(i);
    t.e[j] = (ext - v.neg_sample(j)) / kTwoPi;
  }
  return t;
}

Mat dense_kernel(const ToeplitzKernel& t, bool transpose_blocks) {
  const int k = t.g.points(), q = static_cast<int>(t.e.size()) - 1;
  const int br = transpose_blocks ? t.cols : t.rows, bc = transpose_blocks ? t.rows : t.cols;
  Mat a = Mat::Zero(k * br, k * bc);
  auto add = [&](int r, int c, const Mat& b, double s) {
    if (transpose_blocks)
      a.block(r * br, c * bc, br, bc) += s * b.transpose();
    else
      a.block(r * br, c * bc, br, bc) += s * b;
  };
  for (int r = 0; r < k; ++r)
    for (int l = 0; l < k; ++l) add(r, l, t.base[r - l + k - 1], t.g.weight(l));
  for (int r = 0; r < k; ++r)
    for (int j = 0; j <= q && r + j < k; ++j) {
      const double c = t.coeff(r, j);
      if (c != 0.0) add(r, r + j, t.e[j], c);
    }
  return a;
}

BlockSeq base_seq(const ToeplitzKernel& t) {
  const int k = t.g.points();
  BlockSeq s;
  s.rows = t.rows;
  s.cols = t.cols;
  s.first = -(k - 1);
  s.data.resize(2 * k - 1, t.rows * t.cols);
  for (int n = 0; n < 2 * k - 1; ++n)
    for (int i = 0; i < t.rows; ++i)
      for (int j = 0; j < t.cols; ++j) s.data(n, i * t.cols + j) = t.base[n](i, j);
  return s;
}

}  // namespace

FlatOperator toeplitz_right(const SymbolField& v, bool kink_correction) {
  return FlatOperator(dense_kernel(make_kernel(v, kink_correction), false), Linearity::linear, v.grid(), Slices::columns, v.cols(),
                      Slices::columns, v.rows());
}

FlatOperator toeplitz_left(const SymbolField& v, bool kink_correction) {
  return FlatOperator(dense_kernel(make_kernel(v, kink_correction), true), Linearity::linear, v.grid(), Slices::rows, v.rows(),
                      Slices::rows, v.cols());
}

HardyField apply_toeplitz_right(const SymbolField& v, const HardyField& g, int pad_factor) {
  require_same_grid(v.grid(), g.grid(), "toeplitz_right");
  if (g.rows() != v.cols()) throw ShapeError("toeplitz_right: shape mismatch");
  const ToeplitzKernel t = make_kernel(v);
  const int k = t.g.points(), q = t.g.end_order();
  const BlockSeq out = fft::block_convolve(base_seq(t), to_seq(g, true, true), 0, k, pad_factor);
  HardyField r(g.grid(), v.rows(), g.cols());
  r.data() = out.data;
  for (int n = 0; n < k; ++n)
    for (int j = 0; j <= q && n + j < k; ++j) {
      const double c = t.coeff(n, j);
      if (c == 0.0) continue;
      r.set_sample(n, r.sample(n) + c * t.e[j] * g.sample(n + j));
    }
  return r;
}

HardyField apply_toeplitz_left(const SymbolField& v, const HardyField& f, int pad_factor) {
  require_same_grid(v.grid(), f.grid(), "toeplitz_left");
  if (f.cols() != v.rows()) throw ShapeError("toeplitz_left: shape mismatch");
  const ToeplitzKernel t = make_kernel(v);
  const int k = t.g.points(), q = t.g.end_order();
  const BlockSeq out = fft::block_convolve(to_seq(f, true, true), base_seq(t), 0, k, pad_factor);
  HardyField r(f.grid(), f.rows(), v.cols());
  r.data() = out.data;
  for (int n = 0; n < k; ++n)
    for (int j = 0; j <= q && n + j < k; ++j) {
      const double c = t.coeff(n, j);
      if (c == 0.0) continue;
      r.set_sample(n, r.sample(n) + c * f.sample(n + j) * t.e[j]);
    }
  return r;
}

FlatOperator double_hankel_rl(const HardyField& u) { return compose(hankel_right(u), hankel_left(u)); }
FlatOperator double_hankel_lr(const HardyField& u) { return compose(hankel_left(u), hankel_right(u)); }

FlatOperator hankel_toeplitz_identity_defect(const HardyField& u, const HardyField& v) {
  const FlatOperator lhs = compose(hankel_right(u), hankel_left(v));
  const FlatOperator rhs =
      toeplitz_right(symbol_product(u, v)) -
      compose(toeplitz_right(hardy_symbol(u.base())), toeplitz_right(adjoint_symbol(hardy_symbol(v.base()))));
  return lhs - rhs;
}

FlatOperator hankel_toeplitz_identity_defect_left(const HardyField& v, const HardyField& w) {
  const FlatOperator lhs = compose(hankel_left(v), hankel_right(w));
  const FlatOperator rhs =
      toeplitz_left(symbol_product_adjoint(w, v)) -
      compose(toeplitz_left(hardy_symbol(v.base())), toeplitz_left(adjoint_symbol(hardy_symbol(w.base()))));
  return lhs - rhs;
}

double hankel_toeplitz_identity_residual(const HardyField& u, const HardyField& v) {
  return weighted_operator_norm(hankel_toeplitz_identity_defect(u, v));
}

double hankel_toeplitz_identity_residual_left(const HardyField& v, const HardyField& w) {
  return weighted_operator_norm(hankel_toeplitz_identity_defect_left(v, w));
}

LowRank m_rl_factors(const HardyField& u) {
  const FreqGrid& g = u.grid();
  const int k = g.points(), m = u.rows(), n = u.cols();
  LowRank f{Mat(k * m, n), Mat(k * m, n)};
  for (int l = 0; l < k; ++l)
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < n; ++c) {
        f.y(l * m + i, c) = u(l, i, c);
        f.z(l * m + i, c) = g.weight(l) / kTwoPi * u(l, i, c);
      }
  return f;
}

LowRank m_lr_factors(const HardyField& u) {
  const FreqGrid& g = u.grid();
  const int k = g.points(), m = u.rows(), n = u.cols();
  LowRank f{Mat(k * n, m), Mat(k * n, m)};
  for (int l = 0; l < k; ++l)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < m; ++c) {
        f.y(l * n + j, c) = u(l, c, j);
        f.z(l * n + j, c) = g.weight(l) / kTwoPi * u(l, c, j);
      }
  return f;
}

FlatOperator m_rl(const HardyField& u) {
  const LowRank f = m_rl_factors(u);
  return FlatOperator(f.y * f.z.adjoint(), Linearity::linear, u.grid(), Slices::columns, u.rows(), Slices::columns,
                      u.rows());
}

FlatOperator m_lr(const HardyField& u) {
  const LowRank f = m_lr_factors(u);
  return FlatOperator(f.y * f.z.adjoint(), Linearity::linear, u.grid(), Slices::rows, u.cols(), Slices::rows,
                      u.cols());
}

ResolventKernel::ResolventKernel(const FreqGrid& grid, cd z) : grid_(grid), z_(z) {
  if (!(z.imag() > 0.0)) throw DomainError("resolvent: Im z must be positive");
  c_ = oscillatory_weights(grid, z);
  for (cd& c : c_) c *= cd(0.0, 1.0);
}

Vec ResolventKernel::apply(const Vec& g, int len) const {
  const int k = grid_.points();
  if (g.size() != k * len) throw ShapeError("resolvent apply: length mismatch");
  Vec out = Vec::Zero(k * len);
  for (int r = 0; r < k; ++r)
    for (int j = 0; r + j < k; ++j) out.segment(r * len, len) += c_[j] * g.segment((r + j) * len, len);
  return out;
}

Mat ResolventKernel::apply(const Mat& gs, int len) const {
  Mat out(gs.rows(), gs.cols());
  for (int c = 0; c < gs.cols(); ++c) out.col(c) = apply(Vec(gs.col(c)), len);
  return out;
}

HardyField ResolventKernel::apply(const HardyField& f) const {
  require_same_grid(grid_, f.grid(), "resolvent apply");
  return field_from_slices(apply(slice_matrix(f, Slices::columns), f.rows()), grid_, Slices::columns, f.rows());
}

Mat ResolventKernel::dense(int len) const {
  const int k = grid_.points();
  Mat a = Mat::Zero(k * len, k * len);
  for (int r = 0; r < k; ++r)
    for (int j = 0; r + j < k; ++j)
      for (int p = 0; p < len; ++p) a(r * len + p, (r + j) * len + p) = c_[j];
  return a;
}

ResolventKernel resolvent_G(const FreqGrid& grid, cd z) { return ResolventKernel(grid, z); }

HardyField shift_adjoint(double eta, const HardyField& f) {
  if (eta < 0.0) throw DomainError("shift_adjoint: eta must be nonnegative");
  const FreqGrid& g = f.grid();
  HardyField r(g, f.rows(), f.cols(), f.has_tail());
  const double d = g.spacing();
  for (int k = 0; k < r.nodes(); ++k) {
    const double x = (g.node(k) + eta) / d;
    const int i0 = static_cast<int>(std::floor(x));
    const double t = x - i0;
    for (int e = 0; e < f.rows() * f.cols(); ++e) {
      const cd a = i0 < f.nodes() ? f.data()(i0, e) : cd(0.0);
      const cd b = i0 + 1 < f.nodes() ? f.data()(i0 + 1, e) : cd(0.0);
      r.data()(k, e) = (1.0 - t) * a + t * b;
    }
  }
  return r;
}

BoundaryValue icalI(const HardyField& f) {
  BoundaryValue b{f.sample(0), true};
  const double scale = f.data().cwiseAbs().maxCoeff();
  b.continuous = (f.sample(1) - f.sample(0)).cwiseAbs().maxCoeff() <= 10.0 * f.grid().spacing() * scale;
  return b;
}

}  // namespace szego::operators
