#pragma once

#include "szego/operators.hpp"
#include "szego/trajectory.hpp"

namespace szego::dynamics {

using hardy::HardyField;

// Pi(U U* U), taken as the mean of T^r_{UU*} U and T^l_{U*U} U so that the
// discrete right-hand side commutes exactly with transposition.
HardyField nonlinearity(const HardyField& u, int pad_factor = 2);

// One classical RK4 step of i dU/dt = Pi(U U* U).
HardyField step_rk4(const HardyField& u, double dt, int pad_factor = 2);

Trajectory integrate(const HardyField& u0, const SimConfig& config);

// W(t) from dW/dt = -i T^l_{U*U} W, W(0) = I, integrated together with U
// (same RK4 stages) and applied to a set of probe vectors. Each row of
// `probes` (a P x N field) is one probe; W acts on rows.
struct WRun {
  std::vector<double> times;
  std::vector<HardyField> u;   // U(t)
  std::vector<HardyField> wx;  // W(t) applied to the probes
  double max_gram_drift = 0.0; // before any correction
  int corrections = 0;
};
WRun propagate_W(const HardyField& u0, const HardyField& probes, const SimConfig& config,
                 double correction_threshold = 1e-8);
// Gram matrix of the probe rows in the weighted inner product.
Mat probe_gram(const HardyField& x);

// Largest weighted-norm gap between the run from U0^T and the transposed
// run from U0, over all snapshots.
double transpose_covariance_check(const HardyField& u0, const SimConfig& config);

}  // namespace szego::dynamics
