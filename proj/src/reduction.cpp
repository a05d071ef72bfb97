#include "cssr/reduction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cssr/energy.hpp"
#include "cssr/errors.hpp"
#include "cssr/gauge_fields.hpp"

namespace cssr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs job(i) for i in [0, count) on a small pool of threads.
template <class Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
}

void check_epsilons(const std::vector<double>& eps) {
  if (eps.empty()) throw ConfigError("sweep.epsilons: list is empty");
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw ConfigError("sweep.epsilons: entries must be positive");
    if (k > 0 && !(eps[k] < eps[k - 1])) {
      throw ConfigError("sweep.epsilons: list must be strictly decreasing");
    }
  }
}

std::optional<RateFit> fit_valid(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> fx, fy;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::isfinite(ys[k]) && ys[k] > 0.0) {
      fx.push_back(xs[k]);
      fy.push_back(ys[k]);
    }
  }
  if (fx.size() < 3) return std::nullopt;
  return fit_rate(fx, fy);
}

}  // namespace

Field2D project_ground(const Field2D& phi, const SpectralWorkspace& ws) {
  Field2D c = to_hermite(phi, ws);
  c.rightCols(c.cols() - 1).setZero();
  return from_hermite(c, ws);
}

Field1D extract_phi_eps(const Field2D& phi, double t, double eps, const SpectralWorkspace& ws) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  return std::polar(1.0, t / eps) * to_hermite(phi, ws).col(0);
}

double dynamics_residual(const TrajectoryRecord& traj2d, const TrajectoryRecord& traj1d, double eps,
                         const SpectralWorkspace& ws) {
  const std::size_t n = traj2d.times.size();
  if (traj1d.times.size() != n || traj2d.snapshots.size() != n || traj1d.snapshots.size() != n) {
    throw ConfigError("dynamics_residual: trajectories have different time grids or no fields");
  }
  double sup = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(traj2d.times[k] - traj1d.times[k]) > 1e-12 * (1.0 + traj2d.times[k])) {
      throw ConfigError("dynamics_residual: time stamps differ at index " + std::to_string(k));
    }
    const Field1D diff =
        extract_phi_eps(traj2d.snapshots[k], traj2d.times[k], eps, ws) - traj1d.snapshots[k].col(0);
    sup = std::max(sup, norm(diff, ws));
  }
  return sup;
}

double projection_residual(const TrajectoryRecord& traj2d, const SpectralWorkspace& ws) {
  double sup = 0.0;
  for (const auto& s : traj2d.snapshots) {
    Field2D c = to_hermite(s, ws);
    c.col(0).setZero();
    // The Hermite transform is unitary up to the x step.
    sup = std::max(sup, std::sqrt(c.squaredNorm() * ws.grid_x().step()));
  }
  return sup;
}

RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ConfigError("fit_rate: lists differ in length");
  if (xs.size() < 3) throw ConfigError("fit_rate: need at least 3 points");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) throw DomainError("fit_rate: entries must be positive");
    a(k, 0) = std::log(xs[k]);
    a(k, 1) = 1.0;
    b(k) = std::log(ys[k]);
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  const double sse = (a * coef - b).squaredNorm();
  const Eigen::VectorXd lx = a.col(0);
  const double sxx = (lx.array() - lx.mean()).square().sum();
  RateFit fit;
  fit.slope = coef(0);
  fit.intercept = coef(1);
  fit.stderr_slope = n > 2 && sxx > 0.0 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

ReconstructedField reconstruct_psi(const Field2D& phi, double t, double eps, double beta,
                                   const SpectralWorkspace& ws) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  if (phi.rows() != ws.n_x() || phi.cols() != ws.m_y()) {
    throw ConfigError("reconstruct_psi: field shape does not match the workspace");
  }
  const double s = std::sqrt(eps);
  ReconstructedField out;
  out.time = t;
  out.y_nodes = s * ws.basis_y().nodes();
  out.y_weights = s * ws.basis_y().weights();
  out.psi = phi / std::sqrt(s);
  if (beta != 0.0) {
    // In the rescaled variable the physical density integrates as |phi|^2 d(eta).
    const RealField2D phase = s_phase(phi.cwiseAbs2(), ws, s);
    out.psi.array() *= (cplx(0.0, -beta) * phase.cast<cplx>().array()).exp();
  }
  return out;
}

Field1D gaussian_datum(double center, const SpectralWorkspace& ws) {
  const Eigen::ArrayXd z = ws.grid_x().nodes().array() - center;
  Field1D g = (-0.5 * z.square()).exp().cast<cplx>();
  return g / norm(g, ws);
}

SweepReport run_gse_sweep(double beta, const std::vector<double>& epsilons, const FlowConfig& cfg,
                          const SpectralWorkspace& ws, unsigned threads) {
  check_epsilons(epsilons);
  cfg.validate();
  const std::size_t n = epsilons.size();
  SweepReport rep;
  rep.beta = beta;
  rep.epsilons = epsilons;
  rep.status.assign(n, "ok");
  rep.e_eps.assign(n, kNaN);
  rep.energy_2d.assign(n, kNaN);
  rep.gse_gap.assign(n, kNaN);
  rep.iterations.assign(n, 0);
  rep.converged.assign(n, false);

  const GroundState1D g1 = minimize_1d(beta, cfg, ws);
  rep.energy_1d = g1.energy.total;
  parallel_for(n, threads, [&](std::size_t k) {
    const double eps = epsilons[k];
    rep.e_eps[k] = e_eps(eps);
    try {
      const GroundState2D g2 = minimize_2d(beta, eps, cfg, ws);
      rep.energy_2d[k] = g2.energy.total;
      rep.iterations[k] = g2.iterations;
      rep.converged[k] = g2.converged;
      rep.gse_gap[k] = std::abs(g2.energy.total - rep.e_eps[k] - rep.energy_1d);
      if (!g2.converged) rep.status[k] = "not-converged";
    } catch (const std::exception& e) {
      rep.status[k] = e.what();
    }
  });
  if (!g1.converged) {
    for (auto& s : rep.status) {
      if (s == "ok") s = "not-converged";
    }
  }
  rep.gse_rate = fit_valid(rep.epsilons, rep.gse_gap);
  return rep;
}

SweepReport run_dynamics_sweep(double beta, const std::vector<double>& epsilons, double t_final,
                               double dt, const SpectralWorkspace& ws,
                               const DynamicsSweepOptions& opts) {
  check_epsilons(epsilons);
  const std::size_t n = epsilons.size();
  SweepReport rep;
  rep.beta = beta;
  rep.epsilons = epsilons;
  rep.status.assign(n, "ok");
  rep.t_final = t_final;
  rep.proj_residual.assign(n, kNaN);
  rep.dyn_residual.assign(n, kNaN);

  EvolveOptions eo;
  eo.store_fields = true;
  eo.snapshot_stride = opts.snapshot_stride;
  const Field1D phi0 = gaussian_datum(opts.center, ws);
  const TrajectoryRecord traj1d = evolve_1d(phi0, beta, t_final, dt, ws, eo);
  rep.dt = traj1d.dt;
  const Field2D psi0 = product_state(phi0, ws);
  parallel_for(n, opts.threads, [&](std::size_t k) {
    try {
      const TrajectoryRecord traj2d = evolve_2d(psi0, beta, epsilons[k], t_final, dt, ws, eo);
      rep.proj_residual[k] = projection_residual(traj2d, ws);
      rep.dyn_residual[k] = dynamics_residual(traj2d, traj1d, epsilons[k], ws);
    } catch (const InstabilityError& e) {
      rep.status[k] = std::string("unstable: ") + e.what();
    } catch (const std::exception& e) {
      rep.status[k] = e.what();
    }
  });
  rep.proj_rate = fit_valid(rep.epsilons, rep.proj_residual);
  rep.dyn_rate = fit_valid(rep.epsilons, rep.dyn_residual);
  return rep;
}

}  // namespace cssr
