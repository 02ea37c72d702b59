#pragma once

// Small dense linear-algebra helpers shared across the library: the inner
// product convention, operator norms, Haar-distributed unitaries, and seeded
// Gaussian sampling. Everything is sized for the tiny matrices this library
// works with, so plain JacobiSVD / HouseholderQR are the right tools.

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace triplekit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

// Inner product, conjugate-linear in the second argument: <x,y> = sum x_i conj(y_i).
// Written as an explicit loop so that evaluation order is fixed; the triple
// product relies on <x,z-bar> and <z,x-bar> agreeing bit for bit.
inline cplx cdot(const Vector& x, const Vector& y) {
  cplx s{0.0, 0.0};
  for (Eigen::Index i = 0; i < x.size(); ++i) s += x(i) * std::conj(y(i));
  return s;
}

inline double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

inline cplx complex_gaussian(Rng& rng) {
  // Real and imaginary parts drawn in a fixed order for determinism.
  double re = gaussian(rng);
  double im = gaussian(rng);
  return {re, im};
}

inline Matrix complex_gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = complex_gaussian(rng);
  return a;
}

inline Eigen::MatrixXd real_gaussian_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = gaussian(rng);
  return a;
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
// the R diagonal absorbed into Q.
inline Matrix haar_unitary(int n, Rng& rng) {
  Matrix a = complex_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    cplx d = r(j, j);
    double m = std::abs(d);
    q.col(j) *= (m > 0.0) ? d / m : cplx{1.0, 0.0};
  }
  return q;
}

// Haar-distributed real orthogonal matrix (same construction over the reals).
inline Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd a = real_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= (r(j, j) < 0.0) ? -1.0 : 1.0;
  return q;
}

// Uniform point on the unit circle.
inline cplx random_phase(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double t = 2.0 * M_PI * u(rng);
  return {std::cos(t), std::sin(t)};
}

// Two orthonormal real vectors spanning a random 2-plane in R^d.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> random_orthonormal_pair(int d, Rng& rng) {
  Eigen::VectorXd a = real_gaussian_matrix(d, 1, rng);
  a.normalize();
  Eigen::VectorXd b = real_gaussian_matrix(d, 1, rng);
  b -= a * a.dot(b);
  b.normalize();
  return {a, b};
}

// Unit vector in R^d orthogonal to all columns of the given frame.
inline Eigen::VectorXd random_unit_orthogonal_to(const Eigen::MatrixXd& frame, Rng& rng) {
  const int d = static_cast<int>(frame.rows());
  Eigen::VectorXd b = real_gaussian_matrix(d, 1, rng);
  b -= frame * (frame.transpose() * b);
  b.normalize();
  return b;
}

}  // namespace triplekit
