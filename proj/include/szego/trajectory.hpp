#pragma once

#include <vector>

#include "szego/hardy.hpp"

namespace szego::dynamics {

struct SimConfig {
  double xi_max = 32.0;
  int points = 512;
  int end_order = 6;
  double dt = 1e-3;
  double t_final = 1.0;
  int snapshot_stride = 100;  // steps between snapshots
  int pad_factor = 2;
  std::vector<double> extra_times;  // additional snapshot times, multiples of dt

  FreqGrid grid() const { return FreqGrid(xi_max, points, end_order); }
  void validate() const;
};

struct Snapshot {
  double t = 0.0;
  hardy::HardyField u;
};

struct Trajectory {
  SimConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<double> mass;  // ||U||^2 at each snapshot
  double wall_seconds = 0.0;

  // Snapshot at time t (within 1e-9), or nullptr.
  const Snapshot* at(double t) const;
};

}  // namespace szego::dynamics
