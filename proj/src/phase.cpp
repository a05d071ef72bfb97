// Phase S[rho]. For a source column at distance d = x - x' the y integral
//   G(d) = int arctan(s (y - y') / d) rho(x', y') dy'
// splits as (pi/2) sgn(d) A(x', y) + H(d), with A = int sgn(y - y') rho dy' and H continuous,
// H(0) = 0. The jump part is integrated in x' spectrally; H is summed over columns, using the
// Lorentzian form of the y integral on panels graded toward the singular point when d is
// small, and Gauss-Hermite otherwise.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cssr/errors.hpp"
#include "cssr/gauge_fields.hpp"

namespace cssr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanelNodes = 12;
constexpr double kNearRadius = 1.0;  // in units of the scaled y coordinate

void gauss_legendre(int n, double lo, double hi, Eigen::VectorXd& x, Eigen::VectorXd& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x(i) = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z;
    w(i) = (hi - lo) / ((1.0 - z * z) * dp * dp);
  }
}

// sum_k c_k (2 I_k(y) - I_k(inf)) without temporaries.
double sgn_series(const double* c, Eigen::Index stride, int m, double y, const double* totals) {
  const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * y * y);
  double i_prev = std::pow(kPi, 0.25) / std::sqrt(2.0) * std::erfc(-y / std::sqrt(2.0));
  double sum = c[0] * (2.0 * i_prev - totals[0]);
  if (m == 1) return sum;
  double h_prev = h0;
  double h_cur = std::sqrt(2.0) * y * h0;
  double i_cur = -std::sqrt(2.0) * h0;
  sum += c[stride] * (2.0 * i_cur - totals[1]);
  for (int k = 1; k + 1 < m; ++k) {
    const double i_next = (std::sqrt(double(k)) * i_prev - std::sqrt(2.0) * h_cur) / std::sqrt(k + 1.0);
    const double h_next =
        std::sqrt(2.0 / (k + 1)) * y * h_cur - std::sqrt(double(k) / (k + 1)) * h_prev;
    sum += c[(k + 1) * stride] * (2.0 * i_next - totals[k + 1]);
    i_prev = i_cur;
    i_cur = i_next;
    h_prev = h_cur;
    h_cur = h_next;
  }
  return sum;
}

}  // namespace

PhaseField::PhaseField(const RealField2D& rho, const SpectralWorkspace& ws, double y_scale)
    : ws_(ws), rho_(rho), scale_(y_scale) {
  if (rho.rows() != ws.n_x() || rho.cols() != ws.m_y()) {
    throw ConfigError("s_phase: density shape does not match the workspace");
  }
  if (!(y_scale > 0.0)) throw ConfigError("s_phase: y scale must be positive");
  coeffs_ = rho * ws.basis_y().analysis();
  totals_ = hermite::integrals(ws.m_y());
  gauss_legendre(kPanelNodes, -1.0, 1.0, panel_nodes_, panel_weights_);
}

Eigen::VectorXd PhaseField::column_potential(double y) const {
  const int m = ws_.m_y();
  const Eigen::VectorXd b = 2.0 * hermite::antiderivatives(y, m) - hermite::integrals(m);
  return coeffs_ * b;
}

// (pi/2) int sgn(x - x') A(x') dx' from the trigonometric interpolant of A.
double PhaseField::jump_part(const Eigen::VectorXd& column_a, double x) const {
  const auto& grid = ws_.grid_x();
  const int n = grid.size();
  Field2D a_hat = column_a.cast<cplx>();
  ws_.fft_x(a_hat.data(), 1, false);
  const double x0 = grid.nodes()(0);
  const double mean = a_hat(0, 0).real() / n;
  const double total = mean * 2.0 * grid.half_width();
  const auto& k = grid.wavenumbers();
  double periodic = 0.0;
  for (int i = 0; i < n; ++i) {
    if (k(i) == 0.0) continue;
    const cplx c = a_hat(i, 0) / (cplx(0.0, k(i)) * double(n));
    periodic += (c * (std::polar(1.0, k(i) * (x - x0)) - 1.0)).real();
  }
  const double cumulative = mean * (x - x0) + periodic;
  return 0.5 * kPi * (2.0 * cumulative - total);
}

// Quadrature for int [A(y + v) - A(y)] t / (t^2 + v^2) dv, t = |d| / s, on panels graded toward
// v = 0. Outside [lo, hi] a column potential equals its limits +-M, so the tails are exact:
// the integral is sum_q w_q (A(y + v_q) - A(y)) + (M - A(y)) upper + (-M - A(y)) lower.
struct LorentzRule {
  std::vector<double> points;
  std::vector<double> weights;
  double upper = 0.0;
  double lower = 0.0;
};

LorentzRule PhaseField::lorentz_rule(double t, double y) const {
  const double reach = ws_.basis_y().nodes().maxCoeff() + 3.0;
  const double lo = -reach - y, hi = reach - y;
  std::vector<double> cuts{lo, hi};
  for (double b = 0.125 * t; b < 2.0 * reach + std::abs(y); b *= 2.0) {
    if (b > lo && b < hi) cuts.push_back(b);
    if (-b > lo && -b < hi) cuts.push_back(-b);
  }
  if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());

  LorentzRule rule;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    if (b <= a) continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int q = 0; q < kPanelNodes; ++q) {
      const double v = mid + half * panel_nodes_(q);
      rule.points.push_back(v);
      rule.weights.push_back(half * panel_weights_(q) * t / (t * t + v * v));
    }
  }
  rule.upper = 0.5 * kPi - std::atan(hi / t);
  rule.lower = std::atan(lo / t) + 0.5 * kPi;
  return rule;
}

// H = (sgn d / 2) * Lorentzian integral for one column, without the sign.
double PhaseField::near_column(int i, double column_a, const LorentzRule& rule, double y) const {
  const int m = ws_.m_y();
  const double* c = coeffs_.data() + i;
  const Eigen::Index stride = coeffs_.outerStride();
  const double total_mass = coeffs_.row(i).dot(totals_);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double av = sgn_series(c, stride, m, y + rule.points[q], totals_.data());
    sum += rule.weights[q] * (av - column_a);
  }
  sum += (total_mass - column_a) * rule.upper + (-total_mass - column_a) * rule.lower;
  return 0.5 * sum;
}

// Same for every column at once.
Eigen::VectorXd PhaseField::near_columns(const Eigen::VectorXd& column_a, const LorentzRule& rule,
                                         double y) const {
  const int m = ws_.m_y();
  const Eigen::Index q = static_cast<Eigen::Index>(rule.points.size());
  Eigen::MatrixXd basis(m, q);
  for (Eigen::Index p = 0; p < q; ++p) {
    basis.col(p) = 2.0 * hermite::antiderivatives(y + rule.points[p], m) - totals_;
  }
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), q);
  const Eigen::VectorXd total_mass = coeffs_ * totals_;
  Eigen::VectorXd sum = coeffs_ * (basis * w) - w.sum() * column_a;
  sum += rule.upper * (total_mass - column_a) + rule.lower * (-total_mass - column_a);
  return 0.5 * sum;
}

double PhaseField::smooth_part(const Eigen::VectorXd& column_a, double x, double y) const {
  const auto& grid = ws_.grid_x();
  const auto& basis = ws_.basis_y();
  const int m = basis.size();
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double d = x - grid.nodes()(i);
    if (d == 0.0) continue;
    const double t = std::abs(d) / scale_;
    const double sgn = d > 0.0 ? 1.0 : -1.0;
    double h = 0.0;
    if (t < kNearRadius) {
      h = sgn * near_column(i, column_a(i), lorentz_rule(t, y), y);
    } else {
      double g = 0.0;
      for (int j = 0; j < m; ++j) {
        g += basis.weights()(j) * std::atan(scale_ * (y - basis.nodes()(j)) / d) * rho_(i, j);
      }
      h = g - 0.5 * kPi * sgn * column_a(i);
    }
    sum += h;
  }
  return sum * grid.step();
}

double PhaseField::operator()(double x, double y) const {
  const Eigen::VectorXd a = column_potential(y);
  return jump_part(a, x) + smooth_part(a, x, y);
}

RealField2D PhaseField::on_grid() const {
  const auto& grid = ws_.grid_x();
  const int n = grid.size();
  const auto& basis = ws_.basis_y();
  RealField2D out(n, ws_.m_y());
  for (int j = 0; j < ws_.m_y(); ++j) {
    const double y = basis.nodes()(j);
    const Eigen::VectorXd a = column_potential(y);
    // Jump part at every node at once: cumulative integral through the FFT.
    Field2D a_hat = a.cast<cplx>();
    ws_.fft_x(a_hat.data(), 1, false);
    const double mean = a_hat(0, 0).real() / n;
    const double total = mean * 2.0 * grid.half_width();
    const auto& k = grid.wavenumbers();
    Field2D p_hat(n, 1);
    for (int i = 0; i < n; ++i) p_hat(i, 0) = (k(i) == 0.0) ? cplx(0.0) : a_hat(i, 0) / cplx(0.0, k(i));
    ws_.fft_x(p_hat.data(), 1, true);
    const double p0 = p_hat(0, 0).real();
    for (int i = 0; i < n; ++i) {
      const double x = grid.nodes()(i);
      const double cumulative = mean * (x - grid.nodes()(0)) + p_hat(i, 0).real() - p0;
      out(i, j) = 0.5 * kPi * (2.0 * cumulative - total);
    }
    // On the grid d = k dx, and H is odd in d: column i' contributes g_k(i') to node i' + k
    // and -g_k(i') to node i' - k.
    Eigen::VectorXd smooth = Eigen::VectorXd::Zero(n);
    for (int k = 1; k < n; ++k) {
      const double d = k * grid.step();
      const double t = d / scale_;
      Eigen::VectorXd g;
      if (t < kNearRadius) {
        g = near_columns(a, lorentz_rule(t, y), y);
      } else {
        Eigen::VectorXd kernel(ws_.m_y());
        for (int jj = 0; jj < ws_.m_y(); ++jj) {
          kernel(jj) = basis.weights()(jj) * std::atan(scale_ * (y - basis.nodes()(jj)) / d);
        }
        g = rho_ * kernel - 0.5 * kPi * a;
      }
      smooth.tail(n - k) += g.head(n - k);
      smooth.head(n - k) -= g.tail(n - k);
    }
    out.col(j) += grid.step() * smooth;
  }
  return out;
}

RealField2D s_phase(const RealField2D& rho, const SpectralWorkspace& ws, double y_scale) {
  if (rho.size() > 0 && rho.minCoeff() < -1e-12) {
    throw DomainError("s_phase: density has negative entries");
  }
  return PhaseField(rho, ws, y_scale).on_grid();
}

}  // namespace cssr
