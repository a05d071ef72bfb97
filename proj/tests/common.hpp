#pragma once

#include "cssr/spectral_core.hpp"

namespace testing_ws {

// Default grid: n_x = 256, l_x = 12, m_y = 64.
inline const cssr::SpectralWorkspace& standard() {
  static const cssr::SpectralWorkspace ws{cssr::GridSpec{}};
  return ws;
}

// Coarser grid for tests whose cost grows quickly with resolution.
inline const cssr::SpectralWorkspace& small() {
  static const cssr::SpectralWorkspace ws{cssr::GridSpec{128, 10.0, 32}};
  return ws;
}

}  // namespace testing_ws
