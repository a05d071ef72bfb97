#pragma once

#include <vector>

#include "cssr/spectral_core.hpp"

namespace cssr {

// Recorded every `stride` steps and at the final time. 1D snapshots are single columns.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Field2D> snapshots;  // empty unless fields are stored
  std::vector<double> mass_series;
  std::vector<double> energy_series;
  // Residual of the step ending at each recorded time (0 for the initial datum).
  std::vector<double> continuity_residual_series;
  double dt = 0.0;  // step actually used (t_final / steps)
  long steps = 0;
};

struct EvolveOptions {
  double snapshot_stride = 0.01;
  bool store_fields = false;
  double mass_guard = 1e-3;  // abort when |mass - mass0| exceeds this
};

// Strang splitting: exact half-step phase exp(-i dt/2 (x^2 + pi^2 beta^2 |phi|^4)),
// spectral kinetic step, half-step phase.
TrajectoryRecord evolve_1d(const Field1D& phi0, double beta, double t_final, double dt,
                           const SpectralWorkspace& ws, const EvolveOptions& opts = {});

// Strang splitting L(dt/2) N(dt) L(dt/2) for i phi_t = (1/eps) H_y phi + H_x phi + f[phi]:
// L is exact in the Hermite modes for H_y / eps and split V/2, T, V/2 for H_x; N integrates
// i phi_t = f[phi] with classical RK4. Throws InstabilityError when the mass guard trips.
TrajectoryRecord evolve_2d(const Field2D& phi0, double beta, double eps, double t_final, double dt,
                           const SpectralWorkspace& ws, const EvolveOptions& opts = {});

// L2 norm of (rho_next - rho_prev)/dt + 2 div J at the midpoint state, where div J is
// -Im(conj(phi) H phi) with H the full right-hand side operator (the fast phase of the
// transverse ground mode is removed before averaging).
double continuity_residual(const Field1D& prev, const Field1D& next, double dt, double beta,
                           const SpectralWorkspace& ws);
double continuity_residual(const Field2D& prev, const Field2D& next, double dt, double beta,
                           double eps, const SpectralWorkspace& ws);

// 2 d/dx (j0 + beta a rho) + (2/eps) d/dy Im(conj(phi) phi_y): 2 div J in flux form.
RealField2D current_divergence(const Field2D& phi, double beta, double eps,
                               const SpectralWorkspace& ws);

}  // namespace cssr
