#pragma once

#include <iosfwd>

#include "szego/hardy.hpp"

namespace szego::operators {

enum class Linearity { linear, antilinear };

// How a field is cut into the vectors an operator acts on. Operators that
// multiply from the left act on each column independently; operators that
// multiply from the right act on each row.
enum class Slices { columns, rows };

// Dense discretized operator on slice vectors. A slice vector stacks the
// node samples of one field column (or row): index k*len + position.
// The full action on a field repeats the matrix across the free dimension;
// full() materializes it on flattened (node, row, col) coordinates.
class FlatOperator {
 public:
  FlatOperator() = default;
  FlatOperator(Mat matrix, Linearity lin, const FreqGrid& grid, Slices in, int in_len, Slices out, int out_len);

  const Mat& matrix() const { return m_; }
  Mat& matrix() { return m_; }
  Linearity linearity() const { return lin_; }
  bool antilinear() const { return lin_ == Linearity::antilinear; }
  const FreqGrid& grid() const { return grid_; }
  Slices in_slices() const { return in_; }
  Slices out_slices() const { return out_; }
  int in_len() const { return in_len_; }
  int out_len() const { return out_len_; }

  Vec apply(const Vec& x) const;
  Mat apply(const Mat& xs) const;
  hardy::HardyField apply(const hardy::HardyField& f) const;

  Mat full(int free_dim) const;

 private:
  Mat m_;
  Linearity lin_ = Linearity::linear;
  FreqGrid grid_;
  Slices in_ = Slices::columns, out_ = Slices::columns;
  int in_len_ = 0, out_len_ = 0;
};

FlatOperator compose(const FlatOperator& a, const FlatOperator& b);
FlatOperator operator+(const FlatOperator& a, const FlatOperator& b);
FlatOperator operator-(const FlatOperator& a, const FlatOperator& b);
FlatOperator operator*(cd s, const FlatOperator& a);

// Number of slices a field offers along the given direction, and the
// vector for one of them.
int slice_count(const hardy::HardyField& f, Slices s);
int slice_len(const hardy::HardyField& f, Slices s);
Vec slice_vector(const hardy::HardyField& f, Slices s, int index);
Mat slice_matrix(const hardy::HardyField& f, Slices s);
hardy::HardyField field_from_slices(const Mat& xs, const FreqGrid& grid, Slices s, int len);

// sqrt(w_k / 2pi) repeated over each slice position: D in D A D^{-1}, which
// turns weighted self-adjointness into ordinary Hermiticity.
Eigen::VectorXd half_weights(const FreqGrid& grid, int len);
Mat symmetrized(const FlatOperator& a);
Mat desymmetrized(const Mat& s, const FreqGrid& grid, int len);
// Weighted adjoint of a linear operator.
FlatOperator adjoint(const FlatOperator& a);
// Frobenius norm in the weighted geometry.
double weighted_norm(const FlatOperator& a);
// Largest singular value in the weighted geometry.
double weighted_operator_norm(const FlatOperator& a);
double hermiticity_residual(const FlatOperator& a);

// Full-coordinate matrix of the transpose transform F -> F^T for fields of
// the given shape.
Mat transpose_permutation(const FreqGrid& grid, int rows, int cols);

void write_operator_csv(std::ostream& os, const FlatOperator& a, int free_dim = 1);

}  // namespace szego::operators
