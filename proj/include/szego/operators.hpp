#pragma once

#include "szego/flat_operator.hpp"
#include "szego/hardy.hpp"

namespace szego::operators {

using hardy::HardyField;
using hardy::SymbolField;

// Symbols of products of Hardy fields, as correlations of the half-line
// samples. symbol_product(U, W) is the transform of U W*, and
// symbol_product_adjoint(U, W) that of U* W. Quadrature weights sit on the
// factor whose argument reaches zero.
SymbolField symbol_product(const HardyField& u, const HardyField& w, int pad_factor = 2);
SymbolField symbol_product_adjoint(const HardyField& u, const HardyField& w, int pad_factor = 2);
// U itself as a symbol (zero on the negative half-line) and its adjoint U*.
SymbolField hardy_symbol(const HardyField& u);
SymbolField adjoint_symbol(const SymbolField& v);

// (H^r_U F) = Pi(U F*): rows of F (d x N) to columns of the M x d result.
FlatOperator hankel_right(const HardyField& u);
// (H^l_U G) = Pi(G* U): columns of G (M x d) to rows of the d x N result.
FlatOperator hankel_left(const HardyField& u);

// Pi(V G), multiplying from the left, and Pi(F V), from the right.
// With kink_correction the rows are split at the kink of the kernel, which
// keeps the grid's end order but leaves T_{V*} - T_V^dagger at the size of
// the quadrature error. Without it the plain rule is exactly adjoint-symmetric.
FlatOperator toeplitz_right(const SymbolField& v, bool kink_correction = true);
FlatOperator toeplitz_left(const SymbolField& v, bool kink_correction = true);
// Matrix-free versions on whole fields.
HardyField apply_toeplitz_right(const SymbolField& v, const HardyField& g, int pad_factor = 2);
HardyField apply_toeplitz_left(const SymbolField& v, const HardyField& f, int pad_factor = 2);

FlatOperator double_hankel_rl(const HardyField& u);
FlatOperator double_hankel_lr(const HardyField& u);

// H^r_U H^l_V - (T^r_{UV*} - T^r_U T^r_{V*}) and
// H^l_V H^r_W - (T^l_{W*V} - T^l_V T^l_{W*}), and their weighted operator norms.
// U and V* jump at zero, so the discrete product T_U T_{V*} is off by O(d) in
// the kernel column at xi = 0; in operator norm the defect is O(d^{3/2}),
// while its action on smooth fields is O(d^2).
FlatOperator hankel_toeplitz_identity_defect(const HardyField& u, const HardyField& v);
FlatOperator hankel_toeplitz_identity_defect_left(const HardyField& v, const HardyField& w);
double hankel_toeplitz_identity_residual(const HardyField& u, const HardyField& v);
double hankel_toeplitz_identity_residual_left(const HardyField& v, const HardyField& w);

// m^rl(G) = U (U* G)^(0) on columns, m^lr(F) = (F U*)^(0) U on rows, as
// slice-space factors Y Z^H with Y built from U and Z from the weighted U.
struct LowRank {
  Mat y, z;
};
LowRank m_rl_factors(const HardyField& u);
LowRank m_lr_factors(const HardyField& u);
FlatOperator m_rl(const HardyField& u);
FlatOperator m_lr(const HardyField& u);

// Discretized (G - z)^{-1}:
//   (R_z g)_k = i * sum_j c_j g_{k+j},  c = oscillatory_weights(grid, z),
// a Volterra kernel whose weights do not depend on the row. Row 0 is
// therefore exactly 2 pi i times the Poisson quadrature.
class ResolventKernel {
 public:
  ResolventKernel(const FreqGrid& grid, cd z);
  cd z() const { return z_; }
  const FreqGrid& grid() const { return grid_; }
  // Kernel entry between nodes k and l (zero for l < k).
  cd entry(int k, int l) const { return l < k ? cd(0.0) : c_[l - k]; }
  Vec apply(const Vec& g, int len) const;
  Mat apply(const Mat& gs, int len) const;
  HardyField apply(const HardyField& f) const;
  Mat dense(int len) const;

 private:
  FreqGrid grid_;
  cd z_;
  std::vector<cd> c_;
};
ResolventKernel resolvent_G(const FreqGrid& grid, cd z);

HardyField shift_adjoint(double eta, const HardyField& f);

// Discrete F^(0+); `continuous` reports whether the first two samples agree
// within 10 * d * max|F^|.
struct BoundaryValue {
  Mat value;
  bool continuous = true;
};
BoundaryValue icalI(const HardyField& f);

}  // namespace szego::operators
