#include "cssr/gauge_fields.hpp"

#include <cmath>
#include <numbers>

#include "cssr/errors.hpp"

namespace cssr {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

RealField2D sgn_integral(const RealField2D& g, const SpectralWorkspace& ws) {
  if (g.rows() != ws.n_x() || g.cols() != ws.m_y()) {
    throw ConfigError("sgn_integral: field shape does not match the workspace");
  }
  return apply_y(g, ws.basis_y().sgn_kernel());
}

GaugePotentialX t_convolve(const RealField2D& rho, const SpectralWorkspace& ws) {
  if (rho.size() > 0 && rho.minCoeff() < -1e-12) {
    throw DomainError("t_convolve: density has negative entries (min " +
                      std::to_string(rho.minCoeff()) + ")");
  }
  return -kPi * sgn_integral(rho, ws);
}

FProfile::FProfile(double eps, const SpectralWorkspace& ws) : eps_(eps) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  const auto& basis = ws.basis_y();
  const Eigen::VectorXd u2 = basis.mode_matrix().col(0).array().square();
  const double s = std::sqrt(eps);
  // In the variable y/sqrt(eps) the profile is the sgn integral of u_1^2.
  coeffs_ = basis.analysis().transpose() * u2;
  values_ = basis.sgn_kernel() * u2;
  values_ = 0.5 * (values_ - values_.reverse()).eval();
  nodes_ = s * basis.nodes();
  weights_ = s * basis.weights();
  density_ = u2 / s;
}

double FProfile::operator()(double y) const {
  const int m = static_cast<int>(coeffs_.size());
  const double t = y / std::sqrt(eps_);
  const Eigen::VectorXd b = 2.0 * hermite::antiderivatives(t, m) - hermite::integrals(m);
  return coeffs_.dot(b);
}

FProfile f_profile(double eps, const SpectralWorkspace& ws) { return FProfile(eps, ws); }

CurrentX current_x(const Field2D& psi, const GaugePotentialX& a, const SpectralWorkspace& ws) {
  if (a.rows() != psi.rows() || a.cols() != psi.cols()) {
    throw ConfigError("current_x: potential and field shapes differ");
  }
  const Field2D d = diff_x(psi, ws);
  const RealField2D j0 = (psi.conjugate().cwiseProduct(d)).imag();
  return j0 + a.cwiseProduct(psi.cwiseAbs2());
}

// With M(x) = int rho dy the identities int a^2 rho dy = pi^2 M^3 / 3 and
// a^2 + 2 pi (T0)_x*(a rho) = pi^2 M^2 remove the beta^2 convolutions. The beta-linear
// part uses the Galerkin sgn kernel on the fine grid, where j0 and rho are exact.
GaugeEvaluation evaluate_gauge(const Field2D& phi, double beta, const SpectralWorkspace& ws,
                               bool with_force) {
  if (phi.rows() != ws.n_x() || phi.cols() != ws.m_y()) {
    throw ConfigError("evaluate_gauge: field shape does not match the workspace");
  }
  GaugeEvaluation out;
  if (beta == 0.0) {
    if (with_force) out.force = Field2D::Zero(phi.rows(), phi.cols());
    return out;
  }
  const double dx = ws.grid_x().step();
  const Eigen::VectorXd column_mass = phi.cwiseAbs2() * ws.basis_y().weights();
  const Field2D dphi = diff_x(phi, ws);
  const Field2D u = apply_y(phi, ws.coarse_to_fine());
  const Field2D du = apply_y(dphi, ws.coarse_to_fine());
  const Eigen::Index n = u.rows();

  // a and b0 = (T0)_x * j0 share one product with the kernel.
  RealField2D stacked(2 * n, u.cols());
  stacked.topRows(n) = u.cwiseAbs2();
  stacked.bottomRows(n) = (u.conjugate().cwiseProduct(du)).imag();
  const RealField2D pots = -kPi * apply_y(stacked, ws.gauge_kernel());
  const auto a = pots.topRows(n);
  const auto j0 = stacked.bottomRows(n);

  const double linear = (a.cwiseProduct(j0) * ws.fine_y().weights()).sum();
  out.energy = dx * (2.0 * beta * linear +
                     kPi * kPi * beta * beta / 3.0 * column_mass.array().cube().sum());
  if (!with_force) return out;

  const auto b0 = pots.bottomRows(n);
  const Field2D au = apply_y(Field2D(a.cast<cplx>().cwiseProduct(u)), ws.fine_to_coarse());
  const Field2D adu = apply_y(Field2D(a.cast<cplx>().cwiseProduct(du)), ws.fine_to_coarse());
  const Field2D bu = apply_y(Field2D(b0.cast<cplx>().cwiseProduct(u)), ws.fine_to_coarse());
  out.force = -kI * beta * (adu + diff_x(au, ws)) - 2.0 * beta * bu;
  out.force += (kPi * kPi * beta * beta * column_mass.array().square()).matrix().asDiagonal() * phi;
  return out;
}

Field2D nonlinearity(const Field2D& phi, double beta, const SpectralWorkspace& ws) {
  return evaluate_gauge(phi, beta, ws, true).force;
}

}  // namespace cssr
