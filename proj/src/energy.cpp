#include "cssr/energy.hpp"

#include <cmath>
#include <numbers>

#include "cssr/errors.hpp"
#include "cssr/gauge_fields.hpp"

namespace cssr {

namespace {

constexpr double kPi = std::numbers::pi;

void check_eps(double eps) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
}

Eigen::VectorXd x_squared(const SpectralWorkspace& ws) {
  return ws.grid_x().nodes().array().square();
}

}  // namespace

double e_eps(double eps) {
  check_eps(eps);
  return 1.0 / eps;
}

EnergyBreakdown energy_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws) {
  if (phi.size() != ws.n_x()) throw ConfigError("energy_1d: field size does not match the grid");
  const double dx = ws.grid_x().step();
  const Eigen::ArrayXd rho = phi.cwiseAbs2().array();
  EnergyBreakdown e;
  e.kinetic_x = diff_x(phi, ws).squaredNorm() * dx;
  e.interaction = kPi * kPi * beta * beta / 3.0 * rho.cube().sum() * dx;
  e.potential_x = (x_squared(ws).array() * rho).sum() * dx;
  e.total = e.kinetic_x + e.interaction + e.potential_x;
  return e;
}

namespace {

EnergyBreakdown energy_2d_impl(const Field2D& phi, double beta, double eps,
                               const SpectralWorkspace& ws, Field2D* gradient) {
  check_eps(eps);
  if (phi.rows() != ws.n_x() || phi.cols() != ws.m_y()) {
    throw ConfigError("energy_2d_gauged: field shape does not match the workspace");
  }
  const double dx = ws.grid_x().step();
  const Eigen::VectorXd& w = ws.basis_y().weights();
  const Eigen::VectorXd x2 = x_squared(ws);
  const Field2D coeffs = to_hermite(phi, ws);
  const GaugeEvaluation gauge = evaluate_gauge(phi, beta, ws, gradient != nullptr);

  EnergyBreakdown e;
  e.kinetic_x = (diff_x(phi, ws).cwiseAbs2() * w).sum() * dx;
  e.interaction = gauge.energy;
  e.potential_x = x2.dot(phi.cwiseAbs2() * w) * dx;
  const Eigen::VectorXd& lambda = ws.basis_y().eigenvalues();
  e.transverse = (coeffs.cwiseAbs2() * lambda).sum() * dx / eps;
  e.total = e.kinetic_x + e.interaction + e.potential_x + e.transverse;

  if (gradient) {
    Field2D g = coeffs * (lambda / eps).asDiagonal();
    *gradient = from_hermite(g, ws) + kinetic_x(phi, ws);
    *gradient += x2.asDiagonal() * phi;
    if (beta != 0.0) *gradient += gauge.force;
  }
  return e;
}

}  // namespace

EnergyBreakdown energy_2d_gauged(const Field2D& phi, double beta, double eps,
                                 const SpectralWorkspace& ws) {
  return energy_2d_impl(phi, beta, eps, ws, nullptr);
}

EnergyBreakdown energy_2d_gauged(const Field2D& phi, double beta, double eps,
                                 const SpectralWorkspace& ws, Field2D& gradient) {
  return energy_2d_impl(phi, beta, eps, ws, &gradient);
}

EnergyBreakdown energy_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws,
                          Field1D& gradient) {
  gradient = gradient_1d(phi, beta, ws);
  return energy_1d(phi, beta, ws);
}

Field1D gradient_1d(const Field1D& phi, double beta, const SpectralWorkspace& ws) {
  if (phi.size() != ws.n_x()) throw ConfigError("gradient_1d: field size does not match the grid");
  const Eigen::ArrayXd rho = phi.cwiseAbs2().array();
  const Eigen::ArrayXd pot = x_squared(ws).array() + kPi * kPi * beta * beta * rho.square();
  Field1D g = kinetic_x(phi, ws);
  g.array() += pot * phi.array();
  return g;
}

Field2D gradient_2d(const Field2D& phi, double beta, double eps, const SpectralWorkspace& ws) {
  Field2D g;
  energy_2d_impl(phi, beta, eps, ws, &g);
  return g;
}

}  // namespace cssr
