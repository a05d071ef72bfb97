#include "cssr/verify.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "cssr/energy.hpp"
#include "cssr/gauge_fields.hpp"
#include "cssr/ground_state.hpp"
#include "cssr/reduction.hpp"
#include "cssr/snapshot.hpp"

namespace cssr {

namespace {

constexpr double kPi = std::numbers::pi;

Field1D packet(const SpectralWorkspace& ws, double center, double width) {
  const Eigen::ArrayXd z = (ws.grid_x().nodes().array() - center) / width;
  return (-0.5 * z.square()).exp().cast<cplx>();
}

Field1D profile(int which, const SpectralWorkspace& ws) {
  Field1D f = which == 0   ? packet(ws, 0.0, 1.0)
              : which == 1 ? packet(ws, 1.5, 0.8)
                           : Field1D(packet(ws, -2.0, 1.0) + 0.6 * packet(ws, 2.0, 1.2));
  return f / norm(f, ws);
}

Field1D random_1d(const SpectralWorkspace& ws, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Field1D f = Field1D::Zero(ws.n_x());
  for (int p = 0; p < 3; ++p) {
    const cplx amp(nd(rng), nd(rng));
    f += amp * packet(ws, 0.5 * nd(rng), 0.7 + 0.2 * std::abs(nd(rng)));
  }
  return f;
}

Field2D random_2d(const SpectralWorkspace& ws, std::mt19937_64& rng, int modes = 4) {
  std::normal_distribution<double> nd;
  Field2D c = Field2D::Zero(ws.n_x(), ws.m_y());
  for (int k = 0; k < std::min(modes, ws.m_y()); ++k) c.col(k) = random_1d(ws, rng);
  return from_hermite(c, ws);
}

VerifyCheck check(std::string name, double value, double tol) {
  return {std::move(name), std::isfinite(value) && value <= tol, value, tol};
}

}  // namespace

std::vector<VerifyCheck> run_verify(const SpectralWorkspace& ws) {
  std::vector<VerifyCheck> out;
  std::mt19937_64 rng(20240611);

  double first = 0.0, second = 0.0;
  for (double eps : {1.0, 0.25, 0.05}) {
    const FProfile f = f_profile(eps, ws);
    const Eigen::ArrayXd w = f.weights().array() * f.density().array();
    first = std::max(first, std::abs((w * f.values().array()).sum()));
    second = std::max(second, std::abs((w * f.values().array().square()).sum() - 1.0 / 3.0));
  }
  out.push_back(check("f first moment", first, 1e-10));
  out.push_back(check("f second moment", second, 1e-8));

  double decoupling = 0.0, claim = 0.0;
  for (int p = 0; p < 3; ++p) {
    const Field1D phi0 = profile(p, ws);
    const Field2D phi = product_state(phi0, ws);
    for (double beta : {0.0, 0.5, 1.0, 2.0}) {
      const double e1 = energy_1d(phi0, beta, ws).total;
      for (double eps : {0.5, 0.1}) {
        const double e2 = energy_2d_gauged(phi, beta, eps, ws).total;
        decoupling = std::max(decoupling, std::abs(e2 - e_eps(eps) - e1) / (1.0 + std::abs(e1)));
      }
      if (beta == 0.5 || beta == 1.0) {
        const Field1D proj = to_hermite(nonlinearity(phi, beta, ws), ws).col(0);
        const Field1D quintic = kPi * kPi * beta * beta * phi0.cwiseAbs2().cwiseAbs2().cwiseProduct(phi0);
        claim = std::max(claim, norm(Field1D(proj - quintic), ws));
      }
    }
  }
  out.push_back(check("energy decoupling", decoupling, 1e-6));
  out.push_back(check("effective nonlinearity", claim, 1e-6));

  {
    const Eigen::VectorXd g = profile(1, ws).cwiseAbs2();
    const Eigen::VectorXd u = ground_mode_y(ws);
    const RealField2D rho = g * u.array().square().matrix().transpose();
    const GaugePotentialX a = t_convolve(rho, ws);
    double err = 0.0;
    for (int j = 0; j < ws.m_y(); ++j) {
      err = std::max(err, (a.col(j) + kPi * std::erf(ws.basis_y().nodes()(j)) * g).cwiseAbs().maxCoeff());
    }
    out.push_back(check("gauge potential of a product density", err, 1e-8));
  }

  {
    const double beta = 1.3, h = 1e-5;
    const Field1D phi = random_1d(ws, rng);
    const Field1D grad = gradient_1d(phi, beta, ws);
    double err = 0.0;
    for (int d = 0; d < 5; ++d) {
      const Field1D delta = random_1d(ws, rng);
      const double fd = (energy_1d(Field1D(phi + h * delta), beta, ws).total -
                         energy_1d(Field1D(phi - h * delta), beta, ws).total) / (2.0 * h);
      const double an = 2.0 * inner(grad, delta, ws).real();
      err = std::max(err, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
    out.push_back(check("gradient 1d", err, 1e-6));
  }
  {
    const double beta = 1.0, eps = 0.25, h = 1e-5;
    Field2D phi = random_2d(ws, rng);
    phi /= norm(phi, ws);
    const Field2D grad = gradient_2d(phi, beta, eps, ws);
    double err = 0.0;
    for (int d = 0; d < 3; ++d) {
      const Field2D delta = random_2d(ws, rng);
      const double fd = (energy_2d_gauged(Field2D(phi + h * delta), beta, eps, ws).total -
                         energy_2d_gauged(Field2D(phi - h * delta), beta, eps, ws).total) / (2.0 * h);
      const double an = 2.0 * inner(grad, delta, ws).real();
      err = std::max(err, std::abs(fd - an) / (1.0 + std::abs(an)));
    }
    out.push_back(check("gradient 2d", err, 1e-5));
  }

  {
    const Field2D a = random_2d(ws, rng, 6), b = random_2d(ws, rng, 6);
    const Field2D pa = project_ground(a, ws);
    out.push_back(check("projection idempotent", norm(Field2D(project_ground(pa, ws) - pa), ws), 1e-12));
    out.push_back(check("projection self-adjoint",
                        std::abs(inner(pa, b, ws) - inner(a, project_ground(b, ws), ws)), 1e-12));
    Field2D c = Field2D::Zero(ws.n_x(), ws.m_y());
    c.col(2) = profile(0, ws);
    out.push_back(check("projection kills excited modes",
                        project_ground(from_hermite(c, ws), ws).cwiseAbs().maxCoeff(), 1e-12));
  }

  {
    const GroundState1D g = minimize_1d(0.0, FlowConfig{}, ws);
    out.push_back(check("linear ground energy", g.converged ? std::abs(g.energy.total - 1.0) : INFINITY, 1e-6));
  }

  {
    namespace fs = std::filesystem;
    const Field2D r = random_2d(ws, rng);
    const fs::path path = fs::temp_directory_path() /
                          ("cssr_verify_" + std::to_string(std::random_device{}()) + ".snap");
    SnapshotMeta meta;
    meta.n_x = static_cast<std::uint32_t>(ws.n_x());
    meta.m_y = static_cast<std::uint32_t>(ws.m_y());
    meta.l_x = ws.grid_x().half_width();
    meta.time = 0.125;
    meta.epsilon = 0.1;
    meta.beta = 1.0;
    double mismatch = 1.0;
    try {
      write_snapshot(path.string(), r, meta);
      const Snapshot s = read_snapshot(path.string());
      mismatch = (s.field.array() != r.array()).count() + (s.meta.time != meta.time);
    } catch (const std::exception&) {
    }
    std::error_code ec;
    fs::remove(path, ec);
    out.push_back(check("snapshot round trip", mismatch, 0.0));
  }
  return out;
}

}  // namespace cssr
