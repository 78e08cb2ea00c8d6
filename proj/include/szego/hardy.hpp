#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "szego/grid.hpp"

namespace szego::hardy {

// Matrix-valued Hardy field stored as Fourier samples on xi >= 0.
//
// data() has one row per node and one column per matrix entry (row-major
// entry index i*cols + j). A field either holds the K base nodes or the
// extended range of 2K-1 nodes needed by Hankel kernels.
class HardyField {
 public:
  HardyField() = default;
  HardyField(const FreqGrid& grid, int rows, int cols, bool with_tail = false);

  const FreqGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nodes() const { return static_cast<int>(data_.rows()); }
  bool has_tail() const { return nodes() > grid_.points(); }

  cd& operator()(int k, int i, int j) { return data_(k, i * cols_ + j); }
  cd operator()(int k, int i, int j) const { return data_(k, i * cols_ + j); }
  // Zero beyond the stored range.
  cd value(int k, int i, int j) const { return k < nodes() ? data_(k, i * cols_ + j) : cd(0.0); }

  Mat sample(int k) const;
  void set_sample(int k, const Mat& a);

  Eigen::MatrixXcd& data() { return data_; }
  const Eigen::MatrixXcd& data() const { return data_; }

  // Drops the extension, or zero-pads it when absent.
  HardyField base() const;
  HardyField with_tail() const;

  HardyField& operator+=(const HardyField& o);
  HardyField& operator-=(const HardyField& o);
  HardyField& operator*=(cd s);
  friend HardyField operator+(HardyField a, const HardyField& b) { return a += b; }
  friend HardyField operator-(HardyField a, const HardyField& b) { return a -= b; }
  friend HardyField operator*(cd s, HardyField a) { return a *= s; }

 private:
  FreqGrid grid_;
  int rows_ = 0, cols_ = 0;
  Eigen::MatrixXcd data_;
};

// Fourier samples of a symbol on the whole line, kept as two branches so a
// jump at zero is represented exactly: pos(j) is the sample at +j*d (pos(0)
// the right limit) and neg(j) the sample at -j*d (neg(0) the left limit).
class SymbolField {
 public:
  SymbolField() = default;
  SymbolField(const FreqGrid& grid, int rows, int cols);

  const FreqGrid& grid() const { return grid_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Eigen::MatrixXcd& pos() { return pos_; }
  Eigen::MatrixXcd& neg() { return neg_; }
  const Eigen::MatrixXcd& pos() const { return pos_; }
  const Eigen::MatrixXcd& neg() const { return neg_; }

  Mat pos_sample(int j) const;
  Mat neg_sample(int j) const;
  // Sample at n*d, n in [-(K-1), K-1]; the node at zero reports the mean of
  // the two one-sided limits.
  Mat sample(int n) const;

  bool continuous_at_zero(double tol = 0.0) const;

 private:
  FreqGrid grid_;
  int rows_ = 0, cols_ = 0;
  Eigen::MatrixXcd pos_, neg_;
};

// U0(x) = sum_j A_j / (x - p_j) with every Im p_j < 0.
struct RationalDatum {
  int rows = 1, cols = 1;
  std::vector<cd> poles;
  std::vector<Mat> residues;

  void validate() const;
};

RationalDatum parse_rational_json(const std::string& text);
std::string rational_to_json(const RationalDatum& datum);

// Embeds a Hardy field on the whole line (zero on xi < 0).
SymbolField embed(const HardyField& u);
HardyField szego_project(const SymbolField& f);

cd inner(const HardyField& f, const HardyField& g);
double norm2(const HardyField& f);
// Whole-line pairing, (1/2pi) * sum over both branches.
cd inner(const SymbolField& f, const SymbolField& g);

Mat poisson_eval(const HardyField& u, cd z);
std::vector<Mat> boundary_trace(const HardyField& u, double y, const std::vector<double>& x_nodes);

HardyField chi_eps(double eps, const FreqGrid& grid, bool with_tail = true);
HardyField transpose_field(const HardyField& u);
SymbolField transpose_symbol(const SymbolField& v);

HardyField rational_to_field(const RationalDatum& datum, const FreqGrid& grid, bool with_tail = true);
// Closed-form value of the rational function itself at z in the upper half-plane.
Mat rational_value(const RationalDatum& datum, cd z);

// Fraction of the norm carried by nodes beyond 0.9*xi_max.
double tail_fraction(const HardyField& u);

void write_field_csv(std::ostream& os, const HardyField& u);
void write_symbol_csv(std::ostream& os, const SymbolField& v);

}  // namespace szego::hardy
