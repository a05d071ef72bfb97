#include "cssr/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "cssr/energy.hpp"
#include "cssr/errors.hpp"
#include "cssr/gauge_fields.hpp"

namespace cssr {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

struct StepPlan {
  long steps;
  double dt;
  long stride;
};

StepPlan plan_steps(double t_final, double dt, double snapshot_stride) {
  if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("time.t_final: must be nonnegative");
  if (!(snapshot_stride > 0.0)) throw ConfigError("time.snapshot_stride: must be positive");
  StepPlan p;
  p.steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  p.dt = p.steps > 0 ? t_final / p.steps : dt;
  p.stride = std::max(1L, std::lround(snapshot_stride / p.dt));
  return p;
}

void check_norm(const Field1D& phi0, const SpectralWorkspace& ws) {
  if (phi0.size() != ws.n_x()) throw ConfigError("evolve_1d: initial state size mismatch");
  if (std::abs(mass(phi0, ws) - 1.0) > 1e-8) throw ConfigError("evolve_1d: initial state is not normalized");
}

void check_norm(const Field2D& phi0, const SpectralWorkspace& ws) {
  if (phi0.rows() != ws.n_x() || phi0.cols() != ws.m_y()) {
    throw ConfigError("evolve_2d: initial state shape mismatch");
  }
  if (std::abs(mass(phi0, ws) - 1.0) > 1e-8) throw ConfigError("evolve_2d: initial state is not normalized");
}

template <class Field, class Step, class Energy, class Residual>
TrajectoryRecord integrate(Field phi, const StepPlan& plan, const EvolveOptions& opts,
                           const SpectralWorkspace& ws, Step step, Energy energy,
                           Residual residual) {
  TrajectoryRecord rec;
  rec.dt = plan.dt;
  rec.steps = plan.steps;
  const double mass0 = mass(phi, ws);
  auto record = [&](double t, const Field& state, double cont) {
    rec.times.push_back(t);
    if (opts.store_fields) rec.snapshots.push_back(Field2D(state));
    rec.mass_series.push_back(mass(state, ws));
    rec.energy_series.push_back(energy(state));
    rec.continuity_residual_series.push_back(cont);
  };
  record(0.0, phi, 0.0);
  for (long k = 1; k <= plan.steps; ++k) {
    Field next = step(phi);
    const double m = mass(next, ws);
    if (!std::isfinite(m) || std::abs(m - mass0) > opts.mass_guard) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "mass drift %.3e at t = %.6g exceeds the guard %.1e", m - mass0,
                    k * plan.dt, opts.mass_guard);
      throw InstabilityError(msg);
    }
    if (k % plan.stride == 0 || k == plan.steps) {
      record(k * plan.dt, next, residual(phi, next));
    }
    phi = std::move(next);
  }
  return rec;
}

}  // namespace

TrajectoryRecord evolve_1d(const Field1D& phi0, double beta, double t_final, double dt,
                           const SpectralWorkspace& ws, const EvolveOptions& opts) {
  check_norm(phi0, ws);
  const StepPlan plan = plan_steps(t_final, dt, opts.snapshot_stride);
  const double h = plan.dt;
  const Eigen::ArrayXd x2 = ws.grid_x().nodes().array().square();
  const double g = kPi * kPi * beta * beta;
  auto half_phase = [&](Field1D& phi) {
    const Eigen::ArrayXd v = x2 + g * phi.cwiseAbs2().array().square();
    phi.array() *= (-0.5 * h * kI * v.cast<cplx>()).exp();
  };
  auto step = [&](const Field1D& phi) {
    Field1D out = phi;
    half_phase(out);
    out = propagate_kinetic_x(out, h, ws);
    half_phase(out);
    return out;
  };
  auto energy = [&](const Field1D& phi) { return energy_1d(phi, beta, ws).total; };
  auto residual = [&](const Field1D& a, const Field1D& b) {
    return continuity_residual(a, b, h, beta, ws);
  };
  return integrate(phi0, plan, opts, ws, step, energy, residual);
}

TrajectoryRecord evolve_2d(const Field2D& phi0, double beta, double eps, double t_final, double dt,
                           const SpectralWorkspace& ws, const EvolveOptions& opts) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  check_norm(phi0, ws);
  const StepPlan plan = plan_steps(t_final, dt, opts.snapshot_stride);
  const double h = plan.dt;
  const Eigen::ArrayXd x2 = ws.grid_x().nodes().array().square();
  const Eigen::VectorXcd quarter_potential = (-0.25 * h * kI * x2.cast<cplx>()).exp();

  auto linear_half = [&](const Field2D& phi) {
    Field2D out = propagate_linear_y(phi, 0.5 * h, eps, ws);
    out = quarter_potential.asDiagonal() * out;
    out = propagate_kinetic_x(out, 0.5 * h, ws);
    return Field2D(quarter_potential.asDiagonal() * out);
  };
  auto rhs = [&](const Field2D& phi) { return Field2D(-kI * nonlinearity(phi, beta, ws)); };
  auto step = [&](const Field2D& phi) {
    Field2D u = linear_half(phi);
    if (beta != 0.0) {
      const Field2D k1 = rhs(u);
      const Field2D k2 = rhs(u + 0.5 * h * k1);
      const Field2D k3 = rhs(u + 0.5 * h * k2);
      const Field2D k4 = rhs(u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return linear_half(u);
  };
  auto energy = [&](const Field2D& phi) { return energy_2d_gauged(phi, beta, eps, ws).total; };
  auto residual = [&](const Field2D& a, const Field2D& b) {
    return continuity_residual(a, b, h, beta, eps, ws);
  };
  return integrate(phi0, plan, opts, ws, step, energy, residual);
}

double continuity_residual(const Field1D& prev, const Field1D& next, double dt, double,
                           const SpectralWorkspace& ws) {
  if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
  const Field1D mid = 0.5 * (prev + next);
  const Eigen::ArrayXd drho = (next.cwiseAbs2() - prev.cwiseAbs2()).array() / dt;
  // The potential and quintic terms are real multipliers and drop out of Im(conj(phi) H phi).
  const Eigen::ArrayXd flux = 2.0 * (mid.conjugate().cwiseProduct(kinetic_x(mid, ws))).imag().array();
  return std::sqrt((drho - flux).square().sum() * ws.grid_x().step());
}

double continuity_residual(const Field2D& prev, const Field2D& next, double dt, double beta,
                           double eps, const SpectralWorkspace& ws) {
  if (!(dt > 0.0)) throw ConfigError("time.dt: must be positive");
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  const Field2D mid = 0.5 * (prev + std::polar(1.0, dt / eps) * next);
  const RealField2D drho = (next.cwiseAbs2() - prev.cwiseAbs2()) / dt;
  Field2D h_mid = apply_hy(mid, ws) / eps + kinetic_x(mid, ws);
  if (beta != 0.0) h_mid += nonlinearity(mid, beta, ws);
  const RealField2D flux = 2.0 * mid.conjugate().cwiseProduct(h_mid).imag();
  const RealField2D r = drho - flux;
  return std::sqrt((r.cwiseAbs2() * ws.basis_y().weights()).sum() * ws.grid_x().step());
}

RealField2D current_divergence(const Field2D& phi, double beta, double eps,
                               const SpectralWorkspace& ws) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  const RealField2D rho = phi.cwiseAbs2();
  const GaugePotentialX a = beta != 0.0 ? t_convolve(rho, ws) : RealField2D::Zero(rho.rows(), rho.cols());
  const RealField2D jx = current_x(phi, beta * a, ws);
  const RealField2D jy = phi.conjugate().cwiseProduct(diff_y(phi, ws)).imag();
  Field2D jy_c = jy.cast<cplx>();
  const RealField2D div_y = diff_y(jy_c, ws).real();
  return 2.0 * diff_x(jx, ws) + (2.0 / eps) * div_y;
}

}  // namespace cssr
