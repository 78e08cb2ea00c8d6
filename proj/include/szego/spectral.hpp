#pragma once

#include <string>
#include <vector>

#include "szego/operators.hpp"
#include "szego/trajectory.hpp"

namespace szego::spectral {

using hardy::HardyField;
using operators::FlatOperator;
using operators::Slices;

// rl: H^r H^l acting on columns; lr: H^l H^r acting on rows.
enum class Side { rl, lr };
Side parse_side(const std::string& s);
std::string side_name(Side s);
Slices side_slices(Side s);

// Eigensystem of a weighted self-adjoint operator, stored through the
// symmetrized matrix D A D^{-1} = Q diag(values) Q^H with Q unitary.
struct SpectralDecomp {
  FreqGrid grid;
  Slices slices = Slices::columns;
  int len = 0;
  Eigen::VectorXd values;  // ascending
  Mat sym_vectors;
  Eigen::VectorXd half_w;  // D

  // Eigenvectors of the operator itself, orthonormal in the weighted product.
  Mat vectors() const;
};

// Positive semidefinite input has eigenvalues above -1e-10 * max(1, |A|)
// floored to zero; anything more negative is an error.
SpectralDecomp decompose(const FlatOperator& a, bool psd = true);
Mat reconstruct(const SpectralDecomp& d);

FlatOperator propagator(const SpectralDecomp& d, double t);
// e^{-i t A} applied to slice vectors.
Mat apply_propagator(const SpectralDecomp& d, double t, const Mat& xs);

// (1 - e^{-i t delta}) / (i delta), with the limit t near delta = 0.
cd phi(double delta, double t);

FlatOperator double_hankel(const HardyField& u, Side side);
operators::LowRank m_factors(const HardyField& u, Side side);

// L(t) = (1/2pi) int_0^t e^{-i tau A} m e^{i tau A} d tau as factors y z^H,
// exact in the eigenbasis. Eigenvalues below rank_tol * max are treated as
// zero, which lets the null space be handled in closed form.
operators::LowRank L_factors(const SpectralDecomp& d, const operators::LowRank& m, double t,
                             double rank_tol = 1e-13);
FlatOperator L_operator(const HardyField& u0, double t, Side side);
// Same closed form assembled over the full eigenbasis, without the rank split.
FlatOperator L_operator_full(const SpectralDecomp& d, const operators::LowRank& m, double t);
// Midpoint rule with `nodes` nodes in tau; the oracle for the closed form.
FlatOperator L_quadrature(const SpectralDecomp& d, const operators::LowRank& m, double t, int nodes);

struct ConservedSeries {
  std::vector<double> t, mass, trace, trace_sq;
  std::vector<std::vector<double>> eigenvalues;  // descending, per snapshot
  double mass_drift = 0.0;                        // max relative
  double trace_drift = 0.0;
  double trace_sq_drift = 0.0;
  double eigen_drift = 0.0;  // max relative over eigenvalues above the floor
};
ConservedSeries conserved_report(const dynamics::Trajectory& traj, Side side = Side::lr,
                                 double eigen_floor = 1e-8);

// Frobenius norm (weighted) of the central-difference Heisenberg residual
//   (A(t+h) - A(t-h)) / 2h - i [A(t), T]
// with T the Toeplitz operator of U U* (rl) or U* U (lr).
double lax_residual(const dynamics::Trajectory& traj, double t, double h, Side side = Side::lr);
double lax_residual(const HardyField& before, const HardyField& mid, const HardyField& after, double h, Side side,
                    const hardy::SymbolField* symbol_override = nullptr);

}  // namespace szego::spectral
