#pragma once

#include "szego/grid.hpp"

namespace szego::fft {

// A matrix-valued sequence: row n holds the entries (row-major) of the
// matrix at index first + n.
struct BlockSeq {
  Eigen::MatrixXcd data;
  int rows = 1, cols = 1;
  int first = 0;

  int length() const { return static_cast<int>(data.rows()); }
  int last() const { return first + length() - 1; }
};

// Linear convolution C(n) = sum_m A(m) B(n - m) with matrix products,
// evaluated for n in [lo, lo + count). The transform length is at least
// pad_factor times the longer input and never short enough to wrap.
BlockSeq block_convolve(const BlockSeq& a, const BlockSeq& b, int lo, int count, int pad_factor = 2);

// Same sequence with index n mapped to -n and every entry conjugate-transposed.
BlockSeq reverse_adjoint(const BlockSeq& a);

}  // namespace szego::fft
