#include "cssr/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cssr/errors.hpp"
#include "cssr/snapshot.hpp"

namespace cssr {

namespace {

constexpr double kTauFloor = 1e-6;

// (1 - e^{-z}) / z
double phi1(double z) { return z < 1e-8 ? 1.0 - 0.5 * z : -std::expm1(-z) / z; }

Eigen::VectorXd gaussian_profile(const SpectralWorkspace& ws, double center, double width) {
  const Eigen::ArrayXd z = (ws.grid_x().nodes().array() - center) / width;
  return (-0.5 * z.square()).exp();
}

// Smooth perturbation: a few random complex packets in x.
Field1D noise_1d(std::mt19937_64& rng, const SpectralWorkspace& ws) {
  std::normal_distribution<double> nd;
  Field1D f = Field1D::Zero(ws.n_x());
  for (int p = 0; p < 4; ++p) {
    const double c = nd(rng), w = 0.6 + 0.3 * std::abs(nd(rng));
    f += cplx(nd(rng), nd(rng)) * gaussian_profile(ws, c, w).cast<cplx>();
  }
  return f;
}

template <class Field>
void normalize(Field& f, const SpectralWorkspace& ws) {
  const double n = norm(f, ws);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("ground state flow: state has no mass");
  f /= n;
}

cplx integral(const Field1D& f, const SpectralWorkspace&) { return f.sum(); }
cplx integral(const Field2D& f, const SpectralWorkspace& ws) {
  return (f * ws.basis_y().weights().cast<cplx>()).sum();
}

template <class Field>
void fix_phase(Field& f, const SpectralWorkspace& ws) {
  const cplx s = integral(f, ws);
  if (std::abs(s) > 0.0) f *= std::conj(s) / std::abs(s);
}

Field2D load_seed(const FlowConfig& cfg, const SpectralWorkspace& ws, int m_y) {
  const Snapshot snap = read_snapshot(cfg.seed_file);
  if (static_cast<int>(snap.meta.n_x) != ws.n_x() || static_cast<int>(snap.meta.m_y) != m_y) {
    throw ConfigError("flow.seed_file: snapshot shape " + std::to_string(snap.meta.n_x) + "x" +
                      std::to_string(snap.meta.m_y) + " does not match the grid");
  }
  return snap.field;
}

// Real parts of a complex field through a real x-operator.
Field2D apply_x(const Eigen::MatrixXd& op, const Field2D& f) {
  Field2D out(op.rows(), f.cols());
  out.real() = op * f.real();
  out.imag() = op * f.imag();
  return out;
}

template <class Field, class Evaluate, class Precondition>
GroundStateResult<Field> run_flow(Field phi, const FlowConfig& cfg, const SpectralWorkspace& ws,
                                  Evaluate evaluate, Precondition precondition) {
  GroundStateResult<Field> result;
  normalize(phi, ws);
  Field grad;
  EnergyBreakdown e = evaluate(phi, grad);
  result.energy_history.push_back(e.total);

  double tau = cfg.tau;
  int streak = 0;
  double last_change = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const double mu = inner(phi, grad, ws).real();
    const Field r = grad - mu * phi;
    result.residual = norm(r, ws) / std::max(norm(grad, ws), 1e-300);
    result.chemical_potential = mu;
    if (result.residual <= cfg.tol_residual && std::abs(last_change) <= cfg.tol_energy) {
      result.converged = true;
      break;
    }
    bool accepted = false;
    while (tau >= kTauFloor) {
      Field trial = phi - tau * precondition(r, tau);
      normalize(trial, ws);
      Field trial_grad;
      const EnergyBreakdown et = evaluate(trial, trial_grad);
      if (et.total <= e.total + 1e-14 * (1.0 + std::abs(e.total))) {
        last_change = et.total - e.total;
        phi = std::move(trial);
        grad = std::move(trial_grad);
        e = et;
        accepted = true;
        break;
      }
      tau *= 0.5;
      streak = 0;
    }
    if (!accepted) break;  // no descent left at the step floor
    result.energy_history.push_back(e.total);
    if (++streak >= 10) {
      tau = std::min(1.2 * tau, cfg.tau);
      streak = 0;
    }
  }
  if (!result.converged) {
    const double mu = inner(phi, grad, ws).real();
    result.chemical_potential = mu;
    result.residual = norm(Field(grad - mu * phi), ws) / std::max(norm(grad, ws), 1e-300);
    result.converged = result.residual <= cfg.tol_residual && std::abs(last_change) <= cfg.tol_energy;
  }
  result.iterations = it;
  fix_phase(phi, ws);
  result.state = std::move(phi);
  result.energy = e;
  return result;
}

}  // namespace

SeedProfile parse_seed_profile(const std::string& name) {
  if (name == "gaussian") return SeedProfile::gaussian;
  if (name == "noisy-gaussian") return SeedProfile::noisy_gaussian;
  if (name == "file") return SeedProfile::file;
  throw ConfigError("flow.seed_profile: expected gaussian, noisy-gaussian or file (got '" + name + "')");
}

std::string to_string(SeedProfile p) {
  switch (p) {
    case SeedProfile::gaussian: return "gaussian";
    case SeedProfile::noisy_gaussian: return "noisy-gaussian";
    case SeedProfile::file: return "file";
  }
  return "gaussian";
}

void FlowConfig::validate() const {
  if (!(tau > 0.0)) throw ConfigError("flow.tau: must be positive");
  if (!(tol_energy > 0.0)) throw ConfigError("flow.tol_energy: must be positive");
  if (!(tol_residual > 0.0)) throw ConfigError("flow.tol_residual: must be positive");
  if (max_iters < 1) throw ConfigError("flow.max_iters: must be at least 1");
  if (seed_profile == SeedProfile::file && seed_file.empty()) {
    throw ConfigError("flow.seed_file: required when flow.seed_profile = file");
  }
}

Field1D seed_state_1d(const FlowConfig& cfg, const SpectralWorkspace& ws) {
  Field1D f;
  if (cfg.seed_profile == SeedProfile::file) {
    f = load_seed(cfg, ws, 1).col(0);
  } else {
    f = gaussian_profile(ws, 0.0, 1.0).cast<cplx>();
    if (cfg.seed_profile == SeedProfile::noisy_gaussian) {
      std::mt19937_64 rng(cfg.seed);
      f += 0.3 * noise_1d(rng, ws);
    }
  }
  normalize(f, ws);
  return f;
}

Field2D seed_state_2d(const FlowConfig& cfg, const SpectralWorkspace& ws) {
  Field2D f;
  if (cfg.seed_profile == SeedProfile::file) {
    f = load_seed(cfg, ws, ws.m_y());
  } else {
    Field2D coeffs = Field2D::Zero(ws.n_x(), ws.m_y());
    coeffs.col(0) = gaussian_profile(ws, 0.0, 1.0).cast<cplx>();
    if (cfg.seed_profile == SeedProfile::noisy_gaussian) {
      std::mt19937_64 rng(cfg.seed);
      for (int k = 0; k < std::min(6, ws.m_y()); ++k) coeffs.col(k) += 0.3 * noise_1d(rng, ws);
    }
    f = from_hermite(coeffs, ws);
  }
  normalize(f, ws);
  return f;
}

GroundState1D minimize_1d(double beta, const FlowConfig& cfg, const SpectralWorkspace& ws,
                          const Field1D* initial) {
  cfg.validate();
  Field1D start = initial ? *initial : seed_state_1d(cfg, ws);
  if (start.size() != ws.n_x()) throw ConfigError("minimize_1d: initial state size mismatch");
  const Eigen::MatrixXd& v = ws.hx_vectors();
  const Eigen::VectorXd gaps = ws.hx_values().array() - ws.hx_values()(0);
  auto evaluate = [&](const Field1D& phi, Field1D& grad) { return energy_1d(phi, beta, ws, grad); };
  auto precondition = [&](const Field1D& r, double tau) {
    Field2D c = apply_x(v.transpose(), r);
    for (Eigen::Index n = 0; n < c.rows(); ++n) c(n, 0) *= phi1(tau * gaps(n));
    return Field1D(apply_x(v, c).col(0));
  };
  return run_flow(std::move(start), cfg, ws, evaluate, precondition);
}

GroundState2D minimize_2d(double beta, double eps, const FlowConfig& cfg,
                          const SpectralWorkspace& ws, const Field2D* initial) {
  cfg.validate();
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  Field2D start = initial ? *initial : seed_state_2d(cfg, ws);
  if (start.rows() != ws.n_x() || start.cols() != ws.m_y()) {
    throw ConfigError("minimize_2d: initial state shape mismatch");
  }
  const Eigen::MatrixXd& v = ws.hx_vectors();
  const Eigen::VectorXd gaps_x = ws.hx_values().array() - ws.hx_values()(0);
  const Eigen::VectorXd gaps_y = (ws.basis_y().eigenvalues().array() - 1.0) / eps;
  auto evaluate = [&](const Field2D& phi, Field2D& grad) {
    return energy_2d_gauged(phi, beta, eps, ws, grad);
  };
  auto precondition = [&](const Field2D& r, double tau) {
    Field2D c = apply_x(v.transpose(), to_hermite(r, ws));
    for (Eigen::Index k = 0; k < c.cols(); ++k) {
      for (Eigen::Index n = 0; n < c.rows(); ++n) c(n, k) *= phi1(tau * (gaps_x(n) + gaps_y(k)));
    }
    return from_hermite(apply_x(v, c), ws);
  };
  return run_flow(std::move(start), cfg, ws, evaluate, precondition);
}

}  // namespace cssr
