#include "cssr/spectral_core.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "cssr/errors.hpp"

namespace cssr {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_shape(const Field2D& f, const SpectralWorkspace& ws, const char* what) {
  if (f.rows() != ws.n_x() || f.cols() != ws.m_y()) {
    throw ConfigError(std::string(what) + ": field is " + std::to_string(f.rows()) + "x" +
                      std::to_string(f.cols()) + ", workspace expects " +
                      std::to_string(ws.n_x()) + "x" + std::to_string(ws.m_y()));
  }
}

void require_length(const Field1D& f, const SpectralWorkspace& ws, const char* what) {
  if (f.size() != ws.n_x()) {
    throw ConfigError(std::string(what) + ": field has " + std::to_string(f.size()) +
                      " points, workspace expects " + std::to_string(ws.n_x()));
  }
}

// Multiplies every column by s(k) in Fourier space.
template <class Symbol>
Field2D fourier_multiply(const Field2D& f, const SpectralWorkspace& ws, Symbol s) {
  Field2D out = f;
  ws.fft_x(out.data(), out.cols(), false);
  const auto& k = ws.grid_x().wavenumbers();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, c) *= s(k(i));
  }
  ws.fft_x(out.data(), out.cols(), true);
  return out;
}

// Symmetrizes a node-indexed kernel under y -> -y: K(j,q) = -K(m-1-j, m-1-q).
void antisymmetrize(Eigen::MatrixXd& k) {
  const Eigen::MatrixXd flipped = k.colwise().reverse().rowwise().reverse();
  k = 0.5 * (k - flipped);
}

}  // namespace

GridX::GridX(int n_x, double l_x) : n_(n_x), l_(l_x), dx_(2.0 * l_x / n_x) {
  nodes_.resize(n_);
  k_.resize(n_);
  const double dk = kPi / l_;
  for (int i = 0; i < n_; ++i) {
    nodes_(i) = -l_ + i * dx_;
    const int j = (i < n_ / 2) ? i : i - n_;
    k_(i) = (i == n_ / 2) ? 0.0 : j * dk;
  }
}

namespace hermite {

Eigen::VectorXd functions(double y, int count) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(count);
  if (count == 0) return h;
  h(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * y * y);
  if (count > 1) h(1) = std::sqrt(2.0) * y * h(0);
  for (int k = 1; k + 1 < count; ++k) {
    h(k + 1) = std::sqrt(2.0 / (k + 1)) * y * h(k) - std::sqrt(double(k) / (k + 1)) * h(k - 1);
  }
  return h;
}

Eigen::VectorXd antiderivatives(double y, int count) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(count);
  if (count == 0) return out;
  const Eigen::VectorXd h = functions(y, count);
  out(0) = std::pow(kPi, 0.25) / std::sqrt(2.0) * std::erfc(-y / std::sqrt(2.0));
  if (count > 1) out(1) = -std::sqrt(2.0) * h(0);
  for (int k = 1; k + 1 < count; ++k) {
    out(k + 1) = (std::sqrt(double(k)) * out(k - 1) - std::sqrt(2.0) * h(k)) / std::sqrt(k + 1.0);
  }
  return out;
}

Eigen::VectorXd integrals(int count) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(count);
  if (count == 0) return out;
  out(0) = std::pow(kPi, 0.25) * std::sqrt(2.0);
  for (int k = 1; k + 1 < count; ++k) out(k + 1) = std::sqrt(double(k) / (k + 1)) * out(k - 1);
  return out;
}

}  // namespace hermite

HermiteBasisY::HermiteBasisY(int m_y) : m_(m_y) {
  if (m_ < 1) throw ConfigError("grid.m_y: must be at least 1");
  // Golub-Welsch on the Jacobi matrix of the Hermite weight, then Newton on h_m.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m_);
  Eigen::VectorXd sub(std::max(m_ - 1, 0));
  for (int k = 1; k < m_; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  nodes_ = eig.eigenvalues();
  for (int j = 0; j < m_; ++j) {
    double y = nodes_(j);
    for (int it = 0; it < 4; ++it) {
      const Eigen::VectorXd h = hermite::functions(y, m_ + 1);
      y -= h(m_) / (std::sqrt(2.0 * m_) * h(m_ - 1));
    }
    nodes_(j) = y;
  }
  for (int j = 0; j < m_ / 2; ++j) {
    const double s = 0.5 * (nodes_(m_ - 1 - j) - nodes_(j));
    nodes_(j) = -s;
    nodes_(m_ - 1 - j) = s;
  }
  if (m_ % 2 == 1) nodes_(m_ / 2) = 0.0;

  modes_.resize(m_, m_);
  weights_.resize(m_);
  for (int j = 0; j < m_; ++j) {
    const Eigen::VectorXd h = hermite::functions(nodes_(j), m_);
    modes_.row(j) = h.transpose();
    weights_(j) = 1.0 / h.squaredNorm();
  }
  lambda_.resize(m_);
  for (int k = 0; k < m_; ++k) lambda_(k) = 2.0 * k + 1.0;
  analysis_ = weights_.asDiagonal() * modes_;

  Eigen::MatrixXd b(m_, m_);
  const Eigen::VectorXd total = hermite::integrals(m_);
  for (int j = 0; j < m_; ++j) {
    b.row(j) = (2.0 * hermite::antiderivatives(nodes_(j), m_) - total).transpose();
  }
  sgn_ = b * analysis_.transpose();
  antisymmetrize(sgn_);

  // S_kl = int h_k G_l with G_l = int sgn(. - v) h_l(v) dv. Moving the raising operator
  // onto G_l (G_l' = 2 h_l) gives S_kl = sqrt((k-1)/k) S_{k-2,l} + 2 sqrt(2/k) [l = k-1].
  sgn_modes_ = Eigen::MatrixXd::Zero(m_, m_);
  for (int k = 1; k < m_; ++k) {
    sgn_modes_(k, 0) = (k == 1) ? 2.0 * std::sqrt(2.0) : std::sqrt((k - 1.0) / k) * sgn_modes_(k - 2, 0);
  }
  sgn_modes_.row(0) = -sgn_modes_.col(0).transpose();
  for (int k = 2; k < m_; ++k) {
    sgn_modes_.row(k).tail(m_ - 1) = std::sqrt((k - 1.0) / k) * sgn_modes_.row(k - 2).tail(m_ - 1);
    sgn_modes_(k, k - 1) += 2.0 * std::sqrt(2.0 / k);
  }
  sgn_modes_ = 0.5 * (sgn_modes_ - sgn_modes_.transpose()).eval();
}

Eigen::MatrixXd HermiteBasisY::interpolation_to(const Eigen::VectorXd& points) const {
  Eigen::MatrixXd f(points.size(), m_);
  for (Eigen::Index p = 0; p < points.size(); ++p) {
    f.row(p) = hermite::functions(points(p), m_).transpose();
  }
  return f * analysis_.transpose();
}

void GridSpec::validate() const {
  if (n_x < 16 || (n_x & (n_x - 1)) != 0) {
    throw ConfigError("grid.n_x: must be a power of two >= 16 (got " + std::to_string(n_x) + ")");
  }
  if (!(l_x > 0.0) || !std::isfinite(l_x)) throw ConfigError("grid.l_x: must be positive");
  if (m_y < 2) throw ConfigError("grid.m_y: must be at least 2");
}

struct SpectralWorkspace::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

SpectralWorkspace::SpectralWorkspace(const GridSpec& spec)
    : spec_((spec.validate(), spec)),
      grid_x_(spec.n_x, spec.l_x),
      basis_y_(spec.m_y),
      fine_y_(2 * spec.m_y),
      plans_(std::make_unique<Plans>()) {
  const int n = spec_.n_x;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_complex* buf = fftw_alloc_complex(n);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plans_->forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
  }

  const int m = basis_y_.size();
  to_fine_ = basis_y_.interpolation_to(fine_y_.nodes());
  to_coarse_ = basis_y_.mode_matrix() * fine_y_.analysis().leftCols(m).transpose();
  gauge_kernel_ = fine_y_.mode_matrix() * fine_y_.sgn_modes() * fine_y_.analysis().transpose();

  // Discrete H_x: kinetic part from the Fourier symbol, potential on the diagonal.
  Field2D eye = Field2D::Identity(n, n);
  Field2D kin = fourier_multiply(eye, *this, [](double k) { return cplx(k * k, 0.0); });
  Eigen::MatrixXd hx = kin.real();
  hx = 0.5 * (hx + hx.transpose()).eval();
  hx.diagonal() += grid_x_.nodes().array().square().matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hx);
  hx_values_ = eig.eigenvalues();
  hx_vectors_ = eig.eigenvectors();
}

SpectralWorkspace::~SpectralWorkspace() = default;

void SpectralWorkspace::fft_x(cplx* data, Eigen::Index cols, bool inverse) const {
  const int n = spec_.n_x;
  fftw_plan p = inverse ? plans_->backward : plans_->forward;
  for (Eigen::Index c = 0; c < cols; ++c) {
    auto* col = reinterpret_cast<fftw_complex*>(data + c * n);
    fftw_execute_dft(p, col, col);
  }
  if (inverse) {
    const double s = 1.0 / n;
    for (Eigen::Index i = 0; i < cols * n; ++i) data[i] *= s;
  }
}

Field2D apply_y(const Field2D& f, const Eigen::MatrixXd& op) {
  Field2D out(f.rows(), op.rows());
  Eigen::Map<const Eigen::MatrixXd> fr(reinterpret_cast<const double*>(f.data()), 2 * f.rows(),
                                       f.cols());
  Eigen::Map<Eigen::MatrixXd> outr(reinterpret_cast<double*>(out.data()), 2 * out.rows(),
                                   out.cols());
  outr.noalias() = fr * op.transpose();
  return out;
}

RealField2D apply_y(const RealField2D& f, const Eigen::MatrixXd& op) {
  return f * op.transpose();
}

Field2D to_hermite(const Field2D& psi, const SpectralWorkspace& ws) {
  require_shape(psi, ws, "to_hermite");
  return apply_y(psi, ws.basis_y().analysis().transpose());
}

Field2D from_hermite(const Field2D& coeffs, const SpectralWorkspace& ws) {
  require_shape(coeffs, ws, "from_hermite");
  return apply_y(coeffs, ws.basis_y().mode_matrix());
}

Field2D diff_x(const Field2D& psi, const SpectralWorkspace& ws) {
  if (psi.rows() != ws.n_x()) throw ConfigError("diff_x: row count does not match grid.n_x");
  return fourier_multiply(psi, ws, [](double k) { return cplx(0.0, k); });
}

Field1D diff_x(const Field1D& psi, const SpectralWorkspace& ws) {
  require_length(psi, ws, "diff_x");
  Field2D m = psi;
  return diff_x(m, ws).col(0);
}

RealField2D diff_x(const RealField2D& g, const SpectralWorkspace& ws) {
  Field2D c = g.cast<cplx>();
  return diff_x(c, ws).real();
}

Field2D diff_y(const Field2D& psi, const SpectralWorkspace& ws) {
  const Field2D c = to_hermite(psi, ws);
  const int m = ws.m_y();
  Field2D d = Field2D::Zero(c.rows(), m);
  // h_k' = sqrt(k/2) h_{k-1} - sqrt((k+1)/2) h_{k+1}
  for (int k = 0; k < m; ++k) {
    if (k > 0) d.col(k - 1) += std::sqrt(k / 2.0) * c.col(k);
    if (k + 1 < m) d.col(k + 1) -= std::sqrt((k + 1) / 2.0) * c.col(k);
  }
  return from_hermite(d, ws);
}

Field2D kinetic_x(const Field2D& psi, const SpectralWorkspace& ws) {
  if (psi.rows() != ws.n_x()) throw ConfigError("kinetic_x: row count does not match grid.n_x");
  return fourier_multiply(psi, ws, [](double k) { return cplx(k * k, 0.0); });
}

Field1D kinetic_x(const Field1D& psi, const SpectralWorkspace& ws) {
  require_length(psi, ws, "kinetic_x");
  Field2D m = psi;
  return kinetic_x(m, ws).col(0);
}

Field2D apply_hy(const Field2D& psi, const SpectralWorkspace& ws) {
  Field2D c = to_hermite(psi, ws);
  c = c * ws.basis_y().eigenvalues().asDiagonal();
  return from_hermite(c, ws);
}

double mass(const Field1D& psi, const SpectralWorkspace& ws) {
  require_length(psi, ws, "mass");
  return psi.squaredNorm() * ws.grid_x().step();
}

double mass(const Field2D& psi, const SpectralWorkspace& ws) {
  require_shape(psi, ws, "mass");
  return (psi.cwiseAbs2() * ws.basis_y().weights()).sum() * ws.grid_x().step();
}

cplx inner(const Field1D& a, const Field1D& b, const SpectralWorkspace& ws) {
  return a.dot(b) * ws.grid_x().step();
}

cplx inner(const Field2D& a, const Field2D& b, const SpectralWorkspace& ws) {
  const Eigen::VectorXcd w = ws.basis_y().weights().cast<cplx>();
  return (a.conjugate().cwiseProduct(b) * w).sum() * ws.grid_x().step();
}

double norm(const Field1D& psi, const SpectralWorkspace& ws) { return std::sqrt(mass(psi, ws)); }
double norm(const Field2D& psi, const SpectralWorkspace& ws) { return std::sqrt(mass(psi, ws)); }

Field2D propagate_linear_y(const Field2D& psi, double dt, double eps,
                           const SpectralWorkspace& ws) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  Field2D c = to_hermite(psi, ws);
  const auto& lambda = ws.basis_y().eigenvalues();
  for (int k = 0; k < ws.m_y(); ++k) c.col(k) *= std::polar(1.0, -dt * lambda(k) / eps);
  return from_hermite(c, ws);
}

Field2D decay_linear_y(const Field2D& psi, double tau, double eps, const SpectralWorkspace& ws) {
  if (!(eps > 0.0)) throw ConfigError("physics.epsilon: must be positive");
  Field2D c = to_hermite(psi, ws);
  const auto& lambda = ws.basis_y().eigenvalues();
  for (int k = 0; k < ws.m_y(); ++k) c.col(k) *= std::exp(-tau * lambda(k) / eps);
  return from_hermite(c, ws);
}

Field2D propagate_kinetic_x(const Field2D& psi, double dt, const SpectralWorkspace& ws) {
  return fourier_multiply(psi, ws, [dt](double k) { return std::polar(1.0, -dt * k * k); });
}

Field1D propagate_kinetic_x(const Field1D& psi, double dt, const SpectralWorkspace& ws) {
  require_length(psi, ws, "propagate_kinetic_x");
  Field2D m = psi;
  return propagate_kinetic_x(m, dt, ws).col(0);
}

Eigen::VectorXd ground_mode_y(const SpectralWorkspace& ws) {
  return ws.basis_y().mode_matrix().col(0);
}

Field2D product_state(const Field1D& phi0, const SpectralWorkspace& ws) {
  require_length(phi0, ws, "product_state");
  return phi0 * ground_mode_y(ws).cast<cplx>().transpose();
}

}  // namespace cssr
