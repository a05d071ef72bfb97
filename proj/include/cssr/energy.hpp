#pragma once

#include "cssr/spectral_core.hpp"

namespace cssr {

struct EnergyBreakdown {
  double kinetic_x = 0.0;
  // (pi^2 beta^2 / 3) int |phi|^6 in 1D; in 2D the gauge part of the covariant kinetic
  // energy, int |(-i d/dx + beta a) phi|^2 - int |phi_x|^2, which has no fixed sign.
  double interaction = 0.0;
  double potential_x = 0.0;
  double transverse = 0.0;
  double total = 0.0;
};

// int |phi_x|^2 + (pi^2 beta^2 / 3) int |phi|^6 + int x^2 |phi|^2.
EnergyBreakdown energy_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws);

// Rescaled gauged energy
//   (1/eps) <phi, H_y phi> + int |(-i d/dx + beta a) phi|^2 + int x^2 |phi|^2,
// a = t_convolve(|phi|^2). The transverse part is summed in Hermite modes.
EnergyBreakdown energy_2d_gauged(const Field2D& phi, double beta, double eps,
                                 const SpectralWorkspace& ws);

// dE/d(conj phi): -phi'' + pi^2 beta^2 |phi|^4 phi + x^2 phi.
Field1D gradient_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws);
// (1/eps) H_y phi + H_x phi + f[phi].
Field2D gradient_2d(const Field2D& phi, double beta, double eps, const SpectralWorkspace& ws);

// Energy and gradient from one evaluation of the gauge terms.
EnergyBreakdown energy_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws,
                          Field1D& gradient);
EnergyBreakdown energy_2d_gauged(const Field2D& phi, double beta, double eps,
                                 const SpectralWorkspace& ws, Field2D& gradient);

// Ground energy 1/eps of (1/eps) H_y.
double e_eps(double eps);

}  // namespace cssr
