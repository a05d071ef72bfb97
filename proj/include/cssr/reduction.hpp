#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cssr/dynamics.hpp"
#include "cssr/ground_state.hpp"
#include "cssr/spectral_core.hpp"

namespace cssr {

// Pi_1: keeps only the transverse ground mode.
Field2D project_ground(const Field2D& phi, const SpectralWorkspace& ws);

// exp(i t / eps) int phi u_1 dy, the reduced amplitude with the fast phase removed.
Field1D extract_phi_eps(const Field2D& phi, double t, double eps, const SpectralWorkspace& ws);

// sup over recorded times of |extract_phi_eps(phi_2d(t)) - phi_1d(t)|. Both records need
// stored fields at the same times.
double dynamics_residual(const TrajectoryRecord& traj2d, const TrajectoryRecord& traj1d, double eps,
                         const SpectralWorkspace& ws);

// sup over recorded times of |phi(t) - Pi_1 phi(t)|.
double projection_residual(const TrajectoryRecord& traj2d, const SpectralWorkspace& ws);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // log of the constant
  double stderr_slope = 0.0;
};

// Least squares of log y against log x. Needs at least 3 positive points.
RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys);

// The ungauged field on the unscaled grid (x_i, sqrt(eps) y_j):
//   psi = exp(-i beta S[rho]) eps^{-1/4} phi(x, y / sqrt(eps)).
// Quadratic cost in the grid size.
struct ReconstructedField {
  Field2D psi;
  Eigen::VectorXd y_nodes;
  Eigen::VectorXd y_weights;
  double time = 0.0;
};
ReconstructedField reconstruct_psi(const Field2D& phi, double t, double eps, double beta,
                                   const SpectralWorkspace& ws);

// One row per epsilon. `status` is "ok", "not-converged", "unstable" or an error message;
// failed rows keep NaN residuals and are skipped by the rate fits.
struct SweepReport {
  double beta = 0.0;
  std::vector<double> epsilons;
  std::vector<std::string> status;

  // ground-state sweep
  double energy_1d = 0.0;
  std::vector<double> e_eps;
  std::vector<double> energy_2d;
  std::vector<double> gse_gap;  // |E2D - e_eps - E1D|
  std::vector<int> iterations;
  std::vector<bool> converged;

  // dynamics sweep
  double t_final = 0.0;
  double dt = 0.0;
  std::vector<double> proj_residual;
  std::vector<double> dyn_residual;

  std::optional<RateFit> gse_rate;
  std::optional<RateFit> proj_rate;
  std::optional<RateFit> dyn_rate;
};

// threads = 0 uses the hardware concurrency.
SweepReport run_gse_sweep(double beta, const std::vector<double>& epsilons, const FlowConfig& cfg,
                          const SpectralWorkspace& ws, unsigned threads = 0);

struct DynamicsSweepOptions {
  double center = 1.0;  // initial datum: normalized Gaussian exp(-(x - center)^2 / 2)
  double snapshot_stride = 0.01;
  unsigned threads = 0;
};

SweepReport run_dynamics_sweep(double beta, const std::vector<double>& epsilons, double t_final,
                               double dt, const SpectralWorkspace& ws,
                               const DynamicsSweepOptions& opts = {});

Field1D gaussian_datum(double center, const SpectralWorkspace& ws);

}  // namespace cssr
