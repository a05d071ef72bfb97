#pragma once

#include <complex>
#include <memory>

#include <Eigen/Dense>

namespace cssr {

using cplx = std::complex<double>;

// 1D wavefunction: values at the x nodes.
using Field1D = Eigen::VectorXcd;
// 2D wavefunction in the rescaled frame: rows are x nodes, columns are y nodes.
// Column-major storage keeps x fastest, which is also the snapshot layout.
using Field2D = Eigen::MatrixXcd;
using RealField2D = Eigen::MatrixXd;

// Uniform periodic grid on [-l_x, l_x).
class GridX {
 public:
  GridX(int n_x, double l_x);

  int size() const { return n_; }
  double half_width() const { return l_; }
  double step() const { return dx_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  // FFT ordering; the Nyquist entry is set to 0 so the set is symmetric about 0.
  const Eigen::VectorXd& wavenumbers() const { return k_; }

 private:
  int n_;
  double l_;
  double dx_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd k_;
};

// Normalized Hermite functions h_k (k = 0, 1, ...), h_0 = pi^{-1/4} e^{-y^2/2}.
namespace hermite {
Eigen::VectorXd functions(double y, int count);
// Antiderivatives  int_{-inf}^{y} h_k.
Eigen::VectorXd antiderivatives(double y, int count);
// Full integrals int h_k over the line.
Eigen::VectorXd integrals(int count);
}  // namespace hermite

// Eigenbasis of H_y = -d^2/dy^2 + y^2 collocated at Gauss-Hermite nodes.
// Mode index k = 0..m-1 here corresponds to u_{1,k+1} and lambda = 2k+1.
class HermiteBasisY {
 public:
  explicit HermiteBasisY(int m_y);

  int size() const { return m_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  // Folded weights: sum_j w_j g(y_j) = int g for g = poly * e^{-y^2} of degree <= 2m-1.
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  // (node j, mode k) -> h_k(y_j).
  const Eigen::MatrixXd& mode_matrix() const { return modes_; }
  // (node j, mode k) -> w_j h_k(y_j). Coefficients are values * analysis().
  const Eigen::MatrixXd& analysis() const { return analysis_; }
  // (K g)_j = int sgn(y_j - v) g(v) dv for g in the span of the basis.
  const Eigen::MatrixXd& sgn_kernel() const { return sgn_; }
  // (k, l) -> int int h_k(y) sgn(y - v) h_l(v) dv dy. Exactly antisymmetric.
  const Eigen::MatrixXd& sgn_modes() const { return sgn_modes_; }

  // Values at arbitrary points of the interpolant through the nodes.
  Eigen::MatrixXd interpolation_to(const Eigen::VectorXd& points) const;

 private:
  int m_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd modes_;
  Eigen::MatrixXd analysis_;
  Eigen::MatrixXd sgn_;
  Eigen::MatrixXd sgn_modes_;
};

struct GridSpec {
  int n_x = 256;
  double l_x = 12.0;
  int m_y = 64;

  void validate() const;
};

// Precomputed transforms shared by every solver. Immutable after construction;
// all members are safe to use from several threads at once.
class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& spec = {});
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  const GridSpec& spec() const { return spec_; }
  const GridX& grid_x() const { return grid_x_; }
  const HermiteBasisY& basis_y() const { return basis_y_; }
  int n_x() const { return grid_x_.size(); }
  int m_y() const { return basis_y_.size(); }

  // Fine y grid with twice the nodes. Quadratic quantities (densities, the gauge
  // potential, the nonlinearity) are formed there without aliasing.
  const HermiteBasisY& fine_y() const { return fine_y_; }
  // (fine node, coarse node): exact interpolation of coarse fields.
  const Eigen::MatrixXd& coarse_to_fine() const { return to_fine_; }
  // (coarse node, fine node): L2 projection onto the coarse modes.
  const Eigen::MatrixXd& fine_to_coarse() const { return to_coarse_; }
  // (fine node, fine node): sgn integral followed by projection onto the fine modes.
  // Antisymmetric in the weighted inner product, so energies built on it have exact gradients.
  const Eigen::MatrixXd& gauge_kernel() const { return gauge_kernel_; }

  // Discrete H_x = -d^2/dx^2 + x^2 on the grid, diagonalized.
  const Eigen::MatrixXd& hx_vectors() const { return hx_vectors_; }
  const Eigen::VectorXd& hx_values() const { return hx_values_; }

  // In-place FFT along x of `cols` contiguous columns of length n_x.
  // Forward is unnormalized; inverse divides by n_x.
  void fft_x(cplx* data, Eigen::Index cols, bool inverse) const;

 private:
  struct Plans;

  GridSpec spec_;
  GridX grid_x_;
  HermiteBasisY basis_y_;
  HermiteBasisY fine_y_;
  Eigen::MatrixXd to_fine_;
  Eigen::MatrixXd to_coarse_;
  Eigen::MatrixXd gauge_kernel_;
  Eigen::MatrixXd hx_vectors_;
  Eigen::VectorXd hx_values_;
  std::unique_ptr<Plans> plans_;
};

// Applies a real y-operator from the right: returns f * op^T, i.e. op acts on each x row.
Field2D apply_y(const Field2D& f, const Eigen::MatrixXd& op);
RealField2D apply_y(const RealField2D& f, const Eigen::MatrixXd& op);

Field2D to_hermite(const Field2D& psi, const SpectralWorkspace& ws);
Field2D from_hermite(const Field2D& coeffs, const SpectralWorkspace& ws);

Field1D diff_x(const Field1D& psi, const SpectralWorkspace& ws);
Field2D diff_x(const Field2D& psi, const SpectralWorkspace& ws);
RealField2D diff_x(const RealField2D& g, const SpectralWorkspace& ws);
// y-derivative through the Hermite ladder; the top mode is truncated.
Field2D diff_y(const Field2D& psi, const SpectralWorkspace& ws);

// -d^2/dx^2 with the grid wavenumbers.
Field1D kinetic_x(const Field1D& psi, const SpectralWorkspace& ws);
Field2D kinetic_x(const Field2D& psi, const SpectralWorkspace& ws);
// H_y applied in the eigenbasis.
Field2D apply_hy(const Field2D& psi, const SpectralWorkspace& ws);

double mass(const Field1D& psi, const SpectralWorkspace& ws);
double mass(const Field2D& psi, const SpectralWorkspace& ws);
// <a, b> = int conj(a) b.
cplx inner(const Field1D& a, const Field1D& b, const SpectralWorkspace& ws);
cplx inner(const Field2D& a, const Field2D& b, const SpectralWorkspace& ws);
double norm(const Field1D& psi, const SpectralWorkspace& ws);
double norm(const Field2D& psi, const SpectralWorkspace& ws);

// Mode k picks up exp(-i dt lambda_k / eps).
Field2D propagate_linear_y(const Field2D& psi, double dt, double eps,
                           const SpectralWorkspace& ws);
// Imaginary-time variant: mode k is multiplied by exp(-tau lambda_k / eps).
Field2D decay_linear_y(const Field2D& psi, double tau, double eps, const SpectralWorkspace& ws);
// exp(i dt d^2/dx^2).
Field1D propagate_kinetic_x(const Field1D& psi, double dt, const SpectralWorkspace& ws);
Field2D propagate_kinetic_x(const Field2D& psi, double dt, const SpectralWorkspace& ws);

// u_1 = pi^{-1/4} e^{-y^2/2} at the y nodes.
Eigen::VectorXd ground_mode_y(const SpectralWorkspace& ws);
// phi0(x) u_1(y).
Field2D product_state(const Field1D& phi0, const SpectralWorkspace& ws);

}  // namespace cssr
