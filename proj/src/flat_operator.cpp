#include "szego/flat_operator.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace szego::operators {

using hardy::HardyField;

FlatOperator::FlatOperator(Mat matrix, Linearity lin, const FreqGrid& grid, Slices in, int in_len, Slices out,
                           int out_len)
    : m_(std::move(matrix)), lin_(lin), grid_(grid), in_(in), out_(out), in_len_(in_len), out_len_(out_len) {
  const int k = grid.points();
  if (m_.rows() != k * out_len || m_.cols() != k * in_len) throw ShapeError("operator: matrix size mismatch");
}

Vec FlatOperator::apply(const Vec& x) const {
  if (x.size() != m_.cols()) throw ShapeError("operator apply: vector length mismatch");
  return antilinear() ? Vec(m_ * x.conjugate()) : Vec(m_ * x);
}

Mat FlatOperator::apply(const Mat& xs) const {
  if (xs.rows() != m_.cols()) throw ShapeError("operator apply: vector length mismatch");
  return antilinear() ? Mat(m_ * xs.conjugate()) : Mat(m_ * xs);
}

HardyField FlatOperator::apply(const HardyField& f) const {
  require_same_grid(grid_, f.grid(), "operator apply");
  if (slice_len(f, in_) != in_len_) throw ShapeError("operator apply: field shape mismatch");
  return field_from_slices(apply(slice_matrix(f, in_)), grid_, out_, out_len_);
}

namespace {

// Position of (node k, slice s, position p) in flattened coordinates.
int flat_index(Slices dir, int k, int s, int p, int len, int free_dim) {
  return dir == Slices::columns ? (k * len + p) * free_dim + s : (k * free_dim + s) * len + p;
}

}  // namespace

Mat FlatOperator::full(int free_dim) const {
  const int k = grid_.points();
  Mat f = Mat::Zero(k * out_len_ * free_dim, k * in_len_ * free_dim);
  for (int s = 0; s < free_dim; ++s)
    for (int ko = 0; ko < k; ++ko)
      for (int po = 0; po < out_len_; ++po) {
        const int r = flat_index(out_, ko, s, po, out_len_, free_dim);
        for (int ki = 0; ki < k; ++ki)
          for (int pi = 0; pi < in_len_; ++pi)
            f(r, flat_index(in_, ki, s, pi, in_len_, free_dim)) = m_(ko * out_len_ + po, ki * in_len_ + pi);
      }
  return f;
}

FlatOperator compose(const FlatOperator& a, const FlatOperator& b) {
  require_same_grid(a.grid(), b.grid(), "compose");
  if (a.in_slices() != b.out_slices() || a.in_len() != b.out_len()) throw ShapeError("compose: incompatible shapes");
  Mat m = a.antilinear() ? Mat(a.matrix() * b.matrix().conjugate()) : Mat(a.matrix() * b.matrix());
  const Linearity lin = (a.antilinear() != b.antilinear()) ? Linearity::antilinear : Linearity::linear;
  return FlatOperator(std::move(m), lin, a.grid(), b.in_slices(), b.in_len(), a.out_slices(), a.out_len());
}

namespace {

void require_same_layout(const FlatOperator& a, const FlatOperator& b) {
  require_same_grid(a.grid(), b.grid(), "operator sum");
  if (a.linearity() != b.linearity() || a.in_slices() != b.in_slices() || a.out_slices() != b.out_slices() ||
      a.in_len() != b.in_len() || a.out_len() != b.out_len())
    throw ShapeError("operator sum: incompatible operators");
}

}  // namespace

FlatOperator operator+(const FlatOperator& a, const FlatOperator& b) {
  require_same_layout(a, b);
  return FlatOperator(a.matrix() + b.matrix(), a.linearity(), a.grid(), a.in_slices(), a.in_len(), a.out_slices(),
                      a.out_len());
}

FlatOperator operator-(const FlatOperator& a, const FlatOperator& b) {
  require_same_layout(a, b);
  return FlatOperator(a.matrix() - b.matrix(), a.linearity(), a.grid(), a.in_slices(), a.in_len(), a.out_slices(),
                      a.out_len());
}

FlatOperator operator*(cd s, const FlatOperator& a) {
  return FlatOperator(s * a.matrix(), a.linearity(), a.grid(), a.in_slices(), a.in_len(), a.out_slices(),
                      a.out_len());
}

int slice_count(const HardyField& f, Slices s) { return s == Slices::columns ? f.cols() : f.rows(); }
int slice_len(const HardyField& f, Slices s) { return s == Slices::columns ? f.rows() : f.cols(); }

Vec slice_vector(const HardyField& f, Slices s, int index) {
  const int k = f.grid().points(), len = slice_len(f, s);
  Vec v(k * len);
  for (int n = 0; n < k; ++n)
    for (int p = 0; p < len; ++p) v[n * len + p] = s == Slices::columns ? f(n, p, index) : f(n, index, p);
  return v;
}

Mat slice_matrix(const HardyField& f, Slices s) {
  const int count = slice_count(f, s);
  Mat xs(f.grid().points() * slice_len(f, s), count);
  for (int c = 0; c < count; ++c) xs.col(c) = slice_vector(f, s, c);
  return xs;
}

HardyField field_from_slices(const Mat& xs, const FreqGrid& grid, Slices s, int len) {
  const int k = grid.points(), count = static_cast<int>(xs.cols());
  if (xs.rows() != k * len) throw ShapeError("field_from_slices: length mismatch");
  HardyField f = s == Slices::columns ? HardyField(grid, len, count) : HardyField(grid, count, len);
  for (int c = 0; c < count; ++c)
    for (int n = 0; n < k; ++n)
      for (int p = 0; p < len; ++p) (s == Slices::columns ? f(n, p, c) : f(n, c, p)) = xs(n * len + p, c);
  return f;
}

Eigen::VectorXd half_weights(const FreqGrid& grid, int len) {
  Eigen::VectorXd d(grid.points() * len);
  for (int k = 0; k < grid.points(); ++k) d.segment(k * len, len).setConstant(std::sqrt(grid.weight(k) / kTwoPi));
  return d;
}

Mat symmetrized(const FlatOperator& a) {
  const Eigen::VectorXd dout = half_weights(a.grid(), a.out_len());
  const Eigen::VectorXd din = half_weights(a.grid(), a.in_len());
  return dout.asDiagonal() * a.matrix() * din.cwiseInverse().asDiagonal();
}

Mat desymmetrized(const Mat& s, const FreqGrid& grid, int len) {
  const Eigen::VectorXd d = half_weights(grid, len);
  return d.cwiseInverse().asDiagonal() * s * d.asDiagonal();
}

FlatOperator adjoint(const FlatOperator& a) {
  if (a.antilinear()) throw ShapeError("adjoint: antilinear operator");
  const Eigen::VectorXd dout = half_weights(a.grid(), a.out_len());
  const Eigen::VectorXd din = half_weights(a.grid(), a.in_len());
  Mat m = din.cwiseAbs2().cwiseInverse().asDiagonal() * a.matrix().adjoint() * dout.cwiseAbs2().asDiagonal();
  return FlatOperator(std::move(m), Linearity::linear, a.grid(), a.out_slices(), a.out_len(), a.in_slices(),
                      a.in_len());
}

double weighted_norm(const FlatOperator& a) { return symmetrized(a).norm(); }

double weighted_operator_norm(const FlatOperator& a) {
  const Mat s = symmetrized(a);
  if (s.size() == 0) return 0.0;
  return Eigen::BDCSVD<Mat>(s).singularValues()(0);
}

double hermiticity_residual(const FlatOperator& a) {
  const Mat s = symmetrized(a);
  const double n = s.norm();
  return n > 0.0 ? (s - s.adjoint()).norm() / n : 0.0;
}

Mat transpose_permutation(const FreqGrid& grid, int rows, int cols) {
  const int k = grid.points();
  Mat p = Mat::Zero(k * rows * cols, k * rows * cols);
  for (int n = 0; n < k; ++n)
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) p((n * cols + j) * rows + i, (n * rows + i) * cols + j) = 1.0;
  return p;
}

void write_operator_csv(std::ostream& os, const FlatOperator& a, int free_dim) {
  const Mat f = a.full(free_dim);
  os << "row,col,re,im\n" << std::setprecision(17);
  for (int r = 0; r < f.rows(); ++r)
    for (int c = 0; c < f.cols(); ++c) os << r << ',' << c << ',' << f(r, c).real() << ',' << f(r, c).imag() << '\n';
}

}  // namespace szego::operators
