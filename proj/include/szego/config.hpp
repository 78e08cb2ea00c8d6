#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "szego/spectral.hpp"
#include "szego/trajectory.hpp"

namespace szego::config {

// Raised for anything wrong with a configuration file; the message names the
// offending key path (and line for syntax errors).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double explicit_rel = 1e-4;
  double side_gap = 1e-8;
  double eigen_drift = 1e-6;
  double mass_drift = 1e-8;
  double eigen_floor = 1e-8;
  double im_z_floor = 0.25;
};

struct RunConfig {
  dynamics::SimConfig sim;
  hardy::RationalDatum datum;
  std::vector<double> t_list;
  std::vector<cd> z_grid;
  std::vector<spectral::Side> sides{spectral::Side::rl, spectral::Side::lr};
  Tolerances tol;

  std::string canonical;  // normalized JSON of every setting, defaults included
  std::uint64_t hash = 0; // FNV-1a of `canonical`

  std::string hash_hex() const;
};

// Keys (all optional except datum):
//   grid.xi_max, grid.points, grid.quadrature_order
//   time.dt, time.t_final, time.snapshot_stride
//   datum.shape [M, N], datum.poles [{re, im}], datum.residues [[[re, im] x M*N]]
//   explicit.t_list, explicit.side ("rl" | "lr" | "both"),
//   explicit.z_grid: list of [re, im] or {x_min, x_max, x_step, im: [...]}
//   tolerances.{explicit_rel, side_gap, eigen_drift, mass_drift, eigen_floor, im_z_floor}
RunConfig parse(const std::string& text);
RunConfig load(const std::string& path);

std::uint64_t fnv1a(const std::string& s);

}  // namespace szego::config
