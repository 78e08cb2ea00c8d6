#pragma once

#include <map>
#include <vector>

#include "szego/dynamics.hpp"
#include "szego/spectral.hpp"

namespace szego::explicit_formula {

using hardy::HardyField;
using spectral::Side;

// Evaluates U(t, z) = (1/2 pi i) I((G + L(t) - z)^{-1} e^{-itA} U0) for one
// datum and one side, where A is the double Hankel operator of that side.
// The resolvent is factored as (I + R_z L)^{-1} R_z; L(t) is low rank, so
// the second-kind solve reduces to a small capacitance system.
class ExplicitEvaluator {
 public:
  ExplicitEvaluator(const HardyField& u0, Side side);

  Side side() const { return side_; }
  const spectral::SpectralDecomp& decomposition() const { return decomp_; }

  Mat evaluate(double t, cd z);
  // Split form for concurrent use: prepare every time first, then
  // evaluate_prepared may run from several threads.
  void prepare_times(const std::vector<double>& ts);
  Mat evaluate_prepared(double t, cd z, double* condition = nullptr) const;
  // Reference path: dense L(t) from the full eigenbasis and an LU solve.
  Mat evaluate_dense(double t, cd z);

  double max_condition() const { return max_cond_; }

 private:
  struct TimeData {
    Mat v;                       // e^{-itA} applied to the slices of U0
    operators::LowRank l;        // L(t) = y z^H
  };
  const TimeData& prepare(double t);
  Mat assemble(const Mat& f0) const;

  HardyField u0_;
  Side side_;
  int len_ = 0;
  spectral::SpectralDecomp decomp_;
  operators::LowRank m_;
  std::map<double, TimeData> cache_;
  double max_cond_ = 0.0;
};

Mat explicit_poisson(const HardyField& u0, double t, cd z, Side side);
std::vector<Mat> explicit_trace(const HardyField& u0, double t, double y, const std::vector<double>& x_nodes,
                                Side side);

struct ComparisonRow {
  double t = 0.0;
  cd z;
  Side side = Side::lr;
  Mat value, direct;
  double abs_err = 0.0, rel_err = 0.0;
};

struct CompareReport {
  std::vector<ComparisonRow> rows;
  double max_abs_err = 0.0, max_rel_err = 0.0;
  double max_side_gap = 0.0;  // largest rl/lr disagreement, when both run
  double max_condition = 0.0; // of the capacitance systems
  double direct_seconds = 0.0, explicit_seconds = 0.0;
};

// Relative gap as max entry error over max entry magnitude of the direct value.
double relative_gap(const Mat& value, const Mat& reference);

CompareReport compare_explicit_direct(const HardyField& u0, const dynamics::SimConfig& config,
                                      const std::vector<double>& t_list, const std::vector<cd>& z_list,
                                      const std::vector<Side>& sides);
// Same comparison against an existing direct run that holds every time in t_list.
CompareReport compare_explicit_direct(const HardyField& u0, const dynamics::Trajectory& traj,
                                      const std::vector<double>& t_list, const std::vector<cd>& z_list,
                                      const std::vector<Side>& sides);

}  // namespace szego::explicit_formula
