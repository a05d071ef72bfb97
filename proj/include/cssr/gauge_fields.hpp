#pragma once

#include <Eigen/Dense>

#include "cssr/spectral_core.hpp"

namespace cssr {

// a(x, y) = -pi int sgn(y - y') rho(x, y') dy', the x component of the gauge field.
using GaugePotentialX = RealField2D;
// x component of the current Re[conj(psi) (-i d/dx + a) psi].
using CurrentX = RealField2D;

// int sgn(y - y') g(x, y') dy' for a signed field g on the coarse y nodes.
RealField2D sgn_integral(const RealField2D& g, const SpectralWorkspace& ws);

// Gauge potential of a density. Throws DomainError on entries below -1e-12.
GaugePotentialX t_convolve(const RealField2D& rho, const SpectralWorkspace& ws);

// f(y) = int sgn(y - v) u_eps(v)^2 dv, u_eps(y) = eps^{-1/4} u_1(y / sqrt(eps)).
class FProfile {
 public:
  FProfile(double eps, const SpectralWorkspace& ws);

  double epsilon() const { return eps_; }
  // Physical nodes sqrt(eps) y_j and the matching quadrature weights.
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& values() const { return values_; }
  // u_eps^2 at the nodes.
  const Eigen::VectorXd& density() const { return density_; }
  double operator()(double y) const;

 private:
  double eps_;
  Eigen::VectorXd coeffs_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd values_;
  Eigen::VectorXd density_;
};

FProfile f_profile(double eps, const SpectralWorkspace& ws);

CurrentX current_x(const Field2D& psi, const GaugePotentialX& a, const SpectralWorkspace& ws);

// The gauge nonlinearity
//   f[phi] = b^2 a^2 phi - i b a phi_x - i b (a phi)_x - 2 b [sgn-kernel of (j0 + b a |phi|^2)] phi
// with a = t_convolve(|phi|^2), evaluated on the fine y grid and projected back.
Field2D nonlinearity(const Field2D& phi, double beta, const SpectralWorkspace& ws);

// Gauge part of the covariant kinetic energy,
//   int |(-i d/dx + beta a) phi|^2 - int |phi_x|^2,
// optionally with its variational derivative (which is the nonlinearity).
struct GaugeEvaluation {
  double energy = 0.0;
  Field2D force;
};
GaugeEvaluation evaluate_gauge(const Field2D& phi, double beta, const SpectralWorkspace& ws,
                               bool with_force);

// Phase S[rho](x, y) = int arctan((y - y') * s / (x - x')) rho(x', y') dx' dy' where s is the
// scale of the y coordinate (sqrt(eps) when rho lives in the rescaled frame). On the line
// x = x' the kernel takes the mean of its two one-sided limits, i.e. 0.
struct LorentzRule;

class PhaseField {
 public:
  PhaseField(const RealField2D& rho, const SpectralWorkspace& ws, double y_scale = 1.0);

  double operator()(double x, double y) const;
  // Values at every grid node.
  RealField2D on_grid() const;

 private:
  Eigen::VectorXd column_potential(double y) const;
  double jump_part(const Eigen::VectorXd& column_a, double x) const;
  double smooth_part(const Eigen::VectorXd& column_a, double x, double y) const;
  LorentzRule lorentz_rule(double t, double y) const;
  double near_column(int i, double column_a, const LorentzRule& rule, double y) const;
  Eigen::VectorXd near_columns(const Eigen::VectorXd& column_a, const LorentzRule& rule,
                               double y) const;

  const SpectralWorkspace& ws_;
  RealField2D rho_;
  Eigen::MatrixXd coeffs_;  // Hermite coefficients of each column of rho
  double scale_;
  Eigen::VectorXd totals_;
  Eigen::VectorXd panel_nodes_;
  Eigen::VectorXd panel_weights_;
};

RealField2D s_phase(const RealField2D& rho, const SpectralWorkspace& ws, double y_scale = 1.0);

}  // namespace cssr
