#pragma once

#include <string>
#include <vector>

#include "szego/config.hpp"

namespace szego::selftest {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      // the measured quantity
  double threshold = 0.0;  // bound it is compared against
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  bool all_pass() const;
  // Names of the failing checks, comma separated.
  std::string failures() const;
};

// Operator-identity suite on the datum of `cfg`: adjoint symmetry, transpose
// conjugations, the Hankel/Toeplitz identity under K = 128, 256, 512,
// resolvent/Poisson consistency and the closed-form L(t) against quadrature.
Report run(const config::RunConfig& cfg);

}  // namespace szego::selftest
