#pragma once

#include <string>
#include <vector>

#include "cssr/spectral_core.hpp"

namespace cssr {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured error
  double tolerance = 0.0;
};

// Invariant battery: f moments, energy decoupling, effective nonlinearity, gradients,
// Pi_1 algebra, the erf potential, the linear ground state and a snapshot round trip.
std::vector<VerifyCheck> run_verify(const SpectralWorkspace& ws);

}  // namespace cssr
