// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff every line passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cssr/cli.hpp"
#include "cssr/dynamics.hpp"
#include "cssr/energy.hpp"
#include "cssr/gauge_fields.hpp"
#include "cssr/ground_state.hpp"
#include "cssr/reduction.hpp"
#include "cssr/snapshot.hpp"
#include "oracles.hpp"

using namespace cssr;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kEpsilons{0.4, 0.2, 0.1, 0.05};

// Criterion 1
void f_moments(const SpectralWorkspace& ws) {
  const auto t0 = Clock::now();
  double first = 0.0, second = 0.0;
  for (double eps : {1.0, 0.25, 0.05}) {
    const FProfile f = f_profile(eps, ws);
    const Eigen::ArrayXd w = f.weights().array() * f.density().array();
    first = std::max(first, std::abs((w * f.values().array()).sum()));
    second = std::max(second, std::abs((w * f.values().array().square()).sum() - 1.0 / 3.0));
  }
  const double t = seconds_since(t0);
  report(1, "f-moment identities", first <= 1e-10 && second <= 1e-8 && t < 1.0,
         fmt("max|int f u^2| = %.2e, max|int f^2 u^2 - 1/3| = %.2e, %.2fs", first, second, t));
}

// Criterion 2
void decoupling(const SpectralWorkspace& ws) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int p = 0; p < 3; ++p) {
    const Field1D phi0 = oracle::trial_profile(p, ws);
    const Field2D phi = product_state(phi0, ws);
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const double e1 = energy_1d(phi0, beta, ws).total;
      for (double eps : {0.5, 0.1}) {
        const double e2 = energy_2d_gauged(phi, beta, eps, ws).total;
        worst = std::max(worst, std::abs(e2 - 1.0 / eps - e1) / (1.0 + std::abs(e1)));
      }
    }
  }
  const double t = seconds_since(t0);
  report(2, "energy decoupling", worst <= 1e-6 && t < 5.0,
         fmt("max relative defect %.2e, %.2fs", worst, t));
}

// Criteria 3 and 4
double linear_limit_and_sandwich(const SpectralWorkspace& ws) {
  const FlowConfig cfg;
  auto t0 = Clock::now();
  const GroundState1D g1 = minimize_1d(0.0, cfg, ws);
  const GroundState2D g2 = minimize_2d(0.0, 0.25, cfg, ws);
  double t = seconds_since(t0);
  const double d1 = std::abs(g1.energy.total - 1.0), d2 = std::abs(g2.energy.total - 5.0);
  report(3, "linear limit", g1.converged && g2.converged && d1 <= 1e-6 && d2 <= 1e-5 && t < 30.0,
         fmt("|E1D - 1| = %.2e, |E2D(eps=0.25) - 5| = %.2e, %.1fs", d1, d2, t));

  t0 = Clock::now();
  const GroundState1D g = minimize_1d(1.0, cfg, ws);
  t = seconds_since(t0);
  const double bound = oracle::gaussian_variational_energy(1.0);
  const double e = g.energy.total;
  report(4, "variational sandwich", g.converged && e >= 1.0 && e <= bound && bound - e >= 1e-3 && t < 30.0,
         fmt("1 <= E1D = %.10f <= %.7f, gap %.4f, %.1fs", e, bound, bound - e, t));
  return e;
}

// Criteria 5 and 6
void gse_sweep(const SpectralWorkspace& ws) {
  const auto t0 = Clock::now();
  const SweepReport r = run_gse_sweep(1.0, kEpsilons, FlowConfig{}, ws);
  const double t = seconds_since(t0);
  bool upper = true, ok = true;
  std::string rows;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    const double excess = r.energy_2d[k] - r.e_eps[k];
    upper = upper && excess <= r.energy_1d + 1e-4;
    ok = ok && r.status[k] == "ok";
    rows += fmt(" %.3g:%.6f", r.epsilons[k], excess);
  }
  report(5, "energy upper bound", ok && upper,
         fmt("E1D = %.6f; E2D - e_eps by eps:%s", r.energy_1d, rows.c_str()));

  bool monotone = true;
  for (std::size_t k = 1; k < r.gse_gap.size(); ++k) monotone = monotone && r.gse_gap[k] <= r.gse_gap[k - 1];
  const bool halved = r.gse_gap.back() <= 0.5 * r.gse_gap.front();
  std::string gaps;
  for (double g : r.gse_gap) gaps += fmt(" %.4e", g);
  report(6, "ground-state energy convergence", ok && monotone && halved && t < 600.0,
         fmt("gaps%s, %.1fs", gaps.c_str(), t));
}

// Criterion 7
void effective_nonlinearity(const SpectralWorkspace& ws) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int p = 0; p < 3; ++p) {
    const Field1D phi0 = oracle::trial_profile(p, ws);
    for (double beta : {0.5, 1.0}) {
      const Field1D proj = to_hermite(nonlinearity(product_state(phi0, ws), beta, ws), ws).col(0);
      const Field1D quintic =
          oracle::pi * oracle::pi * beta * beta * phi0.cwiseAbs2().cwiseAbs2().cwiseProduct(phi0);
      worst = std::max(worst, norm(Field1D(proj - quintic), ws));
    }
  }
  const double t = seconds_since(t0);
  report(7, "effective nonlinearity", worst <= 1e-6 && t < 5.0, fmt("max L2 defect %.2e, %.2fs", worst, t));
}

// Criteria 8 and 9
void dynamics_sweep(const SpectralWorkspace& ws) {
  const auto t0 = Clock::now();
  const SweepReport r = run_dynamics_sweep(1.0, kEpsilons, 0.5, 2.5e-4, ws);
  const double t = seconds_since(t0);
  bool ok = true;
  for (const auto& s : r.status) ok = ok && s == "ok";
  if (!ok || !r.proj_rate || !r.dyn_rate) {
    report(8, "projection residual", false, "sweep failed: " + r.status.front());
    report(9, "dynamics reduction", false, "sweep failed");
    return;
  }
  // Constant of the sqrt(eps) law: geometric mean of r / sqrt(eps).
  double log_c = 0.0;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    log_c += std::log(r.proj_residual[k] / std::sqrt(r.epsilons[k]));
  }
  const double c = std::exp(log_c / static_cast<double>(r.epsilons.size()));
  bool within = true;
  std::string rows;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    within = within && r.proj_residual[k] <= 2.0 * std::sqrt(r.epsilons[k]) * c;
    rows += fmt(" %.4e", r.proj_residual[k]);
  }
  report(8, "projection residual", r.proj_rate->slope >= 0.45 && within,
         fmt("slope %.3f +- %.3f, C = %.3f, residuals%s", r.proj_rate->slope, r.proj_rate->stderr_slope, c,
             rows.c_str()));

  bool decreasing = true;
  rows.clear();
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    if (k > 0) decreasing = decreasing && r.dyn_residual[k] < r.dyn_residual[k - 1];
    rows += fmt(" %.4e", r.dyn_residual[k]);
  }
  report(9, "dynamics reduction", decreasing && r.dyn_rate->slope >= 0.20 && t < 1800.0,
         fmt("slope %.3f +- %.3f, residuals%s, %.0fs", r.dyn_rate->slope, r.dyn_rate->stderr_slope, rows.c_str(),
             t));
}

// Criterion 10
void conservation(const SpectralWorkspace& ws) {
  const Field1D phi0 = gaussian_datum(1.0, ws);
  const Field2D psi0 = product_state(phi0, ws);
  EvolveOptions o;
  o.snapshot_stride = 0.05;

  const TrajectoryRecord ref = evolve_2d(psi0, 1.0, 0.25, 1.0, 2.5e-4, ws, o);
  const TrajectoryRecord r1 = evolve_1d(phi0, 1.0, 1.0, 2.5e-4, ws, o);
  double mass_excess = 0.0, energy_drift = 0.0;
  for (const auto* rec : {&ref, &r1}) {
    for (std::size_t k = 0; k < rec->times.size(); ++k) {
      mass_excess = std::max(mass_excess, std::abs(rec->mass_series[k] - 1.0) / (1e-8 * (1.0 + rec->times[k])));
      energy_drift = std::max(energy_drift, std::abs(rec->energy_series[k] - rec->energy_series[0]) /
                                                std::abs(rec->energy_series[0]));
    }
  }

  // Self-convergence against a dt/8 reference, and the continuity residual per halving.
  const double t_final = 0.2;
  EvolveOptions keep;
  keep.store_fields = true;
  keep.snapshot_stride = t_final;
  const Field2D fine = evolve_2d(psi0, 1.0, 0.25, t_final, 1e-3 / 8, ws, keep).snapshots.back();
  std::vector<double> xs, errs, cont;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    const TrajectoryRecord rec = evolve_2d(psi0, 1.0, 0.25, t_final, dt, ws, keep);
    xs.push_back(dt);
    errs.push_back(norm(Field2D(rec.snapshots.back() - fine), ws));
    cont.push_back(rec.continuity_residual_series.back());
  }
  const RateFit order = fit_rate(xs, errs);
  const double shrink = std::min(cont[0] / cont[1], cont[1] / cont[2]);
  report(10, "conservation and consistency",
         mass_excess <= 1.0 && energy_drift <= 1e-5 && std::abs(order.slope - 2.0) <= 0.2 && shrink >= 1.7,
         fmt("mass drift / 1e-8(1+t) = %.2e, relative energy drift %.2e, order %.3f, continuity shrink %.2f",
             mass_excess, energy_drift, order.slope, shrink));
}

// Criterion 11
void gradient_checks(const SpectralWorkspace& ws) {
  std::mt19937_64 rng(1101);
  const double h = 1e-5;
  double e1 = 0.0, e2 = 0.0;
  {
    const Field1D phi = oracle::random_field_1d(ws, rng);
    const Field1D grad = gradient_1d(phi, 1.0, ws);
    for (int d = 0; d < 20; ++d) {
      const Field1D delta = oracle::random_field_1d(ws, rng);
      const double fd = (energy_1d(Field1D(phi + h * delta), 1.0, ws).total -
                         energy_1d(Field1D(phi - h * delta), 1.0, ws).total) / (2.0 * h);
      const double an = 2.0 * inner(grad, delta, ws).real();
      e1 = std::max(e1, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
  }
  {
    Field2D phi = oracle::random_field(ws, rng, 6);
    phi /= norm(phi, ws);
    const Field2D grad = gradient_2d(phi, 1.0, 0.25, ws);
    for (int d = 0; d < 20; ++d) {
      const Field2D delta = oracle::random_field(ws, rng, 6);
      const double fd = (energy_2d_gauged(Field2D(phi + h * delta), 1.0, 0.25, ws).total -
                         energy_2d_gauged(Field2D(phi - h * delta), 1.0, 0.25, ws).total) / (2.0 * h);
      const double an = 2.0 * inner(grad, delta, ws).real();
      e2 = std::max(e2, std::abs(fd - an) / std::max(1.0, std::abs(an)));
    }
  }
  report(11, "gradient checks", e1 <= 1e-6 && e2 <= 1e-5,
         fmt("max relative error 1D %.2e, 2D %.2e over 20 directions each", e1, e2));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Criterion 12
void infrastructure(const SpectralWorkspace& ws) {
  const fs::path dir = fs::temp_directory_path() / "cssr_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  std::mt19937_64 rng(12);
  const Field2D f = oracle::random_field(ws, rng, 8);
  SnapshotMeta meta;
  meta.n_x = static_cast<std::uint32_t>(ws.n_x());
  meta.m_y = static_cast<std::uint32_t>(ws.m_y());
  meta.l_x = ws.grid_x().half_width();
  meta.time = 0.5;
  meta.epsilon = 0.1;
  meta.beta = 1.0;
  write_snapshot((dir / "f.snap").string(), f, meta);
  const Snapshot s = read_snapshot((dir / "f.snap").string());
  const bool bit_exact = s.field.size() == f.size() &&
                         std::memcmp(s.field.data(), f.data(), sizeof(cplx) * f.size()) == 0;

  std::ostringstream sink, errs;
  const int verify = run_cli({"verify", "--out", (dir / "verify").string()}, sink, errs);

  auto sweep = [&](const std::string& out) {
    return run_cli({"sweep-gse", "--out", (dir / out).string(), "--n-x", "128", "--l-x", "10", "--m-y", "32"},
                   sink, errs);
  };
  const int a = sweep("run_a"), b = sweep("run_b");
  const std::string csv_a = slurp(dir / "run_a" / "sweep_gse.csv");
  const bool same = a == 0 && b == 0 && !csv_a.empty() && csv_a == slurp(dir / "run_b" / "sweep_gse.csv");
  report(12, "infrastructure", bit_exact && verify == 0 && same,
         fmt("snapshot %s, verify exit %d, sweep-gse reruns %s", bit_exact ? "bit-exact" : "MISMATCH", verify,
             same ? "byte-identical" : "DIFFER"));
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const SpectralWorkspace ws{GridSpec{}};
  f_moments(ws);
  decoupling(ws);
  linear_limit_and_sandwich(ws);
  gse_sweep(ws);
  effective_nonlinearity(ws);
  dynamics_sweep(ws);
  conservation(ws);
  gradient_checks(ws);
  infrastructure(ws);
  std::printf("%d of 12 criteria failed, total %.0fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
