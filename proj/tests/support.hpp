#pragma once

#include <random>

#include "szego/hardy.hpp"

namespace szego::testing {

// Rational datum with poles a - ib, a in [-2, 2], b in [b_min, 2], and
// residue entries uniform in the unit square.
inline hardy::RationalDatum random_datum(std::uint64_t seed, int rows, int cols, int poles, double b_min = 0.75) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(b_min, 2.0), unit(-1.0, 1.0);
  hardy::RationalDatum d;
  d.rows = rows;
  d.cols = cols;
  for (int p = 0; p < poles; ++p) {
    d.poles.emplace_back(re(rng), -im(rng));
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = cd(unit(rng), unit(rng));
    d.residues.push_back(a);
  }
  return d;
}

// U0 = 1 / (x + i).
inline hardy::RationalDatum scalar_benchmark() {
  hardy::RationalDatum d;
  d.poles = {cd(0.0, -1.0)};
  d.residues = {Mat::Constant(1, 1, 1.0)};
  return d;
}

// 2 x 2 datum with poles -i and -1 - i and seeded residues of modulus below 1/2.
inline hardy::RationalDatum matrix_benchmark(std::uint64_t seed = 20240611) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  hardy::RationalDatum d;
  d.rows = d.cols = 2;
  d.poles = {cd(0.0, -1.0), cd(-1.0, -1.0)};
  for (int p = 0; p < 2; ++p) {
    Mat a(2, 2);
    for (int e = 0; e < 4; ++e) a(e / 2, e % 2) = cd(unit(rng), unit(rng));
    d.residues.push_back(a);
  }
  return d;
}

// Random field samples (no particular decay), for algebraic identities.
inline hardy::HardyField random_field(const FreqGrid& g, int rows, int cols, std::uint64_t seed, bool tail = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  hardy::HardyField f(g, rows, cols, tail);
  for (int k = 0; k < f.nodes(); ++k)
    for (int e = 0; e < rows * cols; ++e) f.data()(k, e) = cd(n(rng), n(rng));
  return f;
}

}  // namespace szego::testing
