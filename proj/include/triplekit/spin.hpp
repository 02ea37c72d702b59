#pragma once

// Geometry of spin factors.
//
// Every nonzero tripotent of spin(d) is either
//   maximal: u = lambda * a             (lambda unimodular, a a real unit vector), or
//   minimal: u = (lambda/2) * (a + i b) (a, b orthonormal real vectors),
// and classify_spin_tripotent recovers such coordinates. spin(4) additionally
// has a concrete model as 2x2 complex matrices through the basis
//   e0^ = I,  e1^ = [[0,-i],[-i,0]],  e2^ = [[0,-1],[1,0]],  e3^ = [[-i,0],[0,i]],
// i.e. ej^ = -i sigma_j for the Pauli matrices sigma_j. Under this model the
// spin determinant sum_mu x_mu^2 becomes the 2x2 determinant, real vectors
// embed as hermitian matrices with Minkowski-norm determinant, qubit states
// are minimal tripotents below the identity, and Lorentz boosts act as
// congruence by exp((rapidity/2) sigma_axis), which preserves determinants
// but destroys tripotency.

#include <cmath>

#include "triplekit/tripotent.hpp"

namespace triplekit {

enum class SpinTripotentKind { zero, minimal, maximal };

struct SpinClassification {
  SpinTripotentKind kind;
  cplx lambda{1.0, 0.0};
  Eigen::VectorXd a;  // real unit vector (maximal and minimal)
  Eigen::VectorXd b;  // second real unit vector (minimal only)
};

namespace detail {

inline void require_spin(const FactorDescriptor& f, const char* who) {
  if (f.kind() != FactorKind::spin)
    throw shape_error(std::string(who) + ": expected a spin factor, got " + f.describe());
}

inline void require_spin4(const FactorDescriptor& f, const char* who) {
  if (f.kind() != FactorKind::spin || f.spin_dim() != 4)
    throw shape_error(std::string(who) + ": expected spin(4), got " + f.describe());
}

inline cplx coordinate_square_sum(const Vector& v) {
  cplx s{0.0, 0.0};
  for (Eigen::Index i = 0; i < v.size(); ++i) s += v(i) * v(i);
  return s;
}

}  // namespace detail

// Phase convention: among the unimodular representatives, pick the one with
// positive real part; on the imaginary axis pick nonnegative imaginary part.
inline cplx canonical_phase(cplx lambda) {
  if (lambda.real() < 0.0) lambda = -lambda;
  if (lambda.real() == 0.0 && lambda.imag() < 0.0) lambda = -lambda;
  return lambda;
}

inline SpinClassification classify_spin_tripotent(const Element& u, const Tolerance& tol = {}) {
  detail::require_spin(u.factor(), "classify_spin_tripotent");
  require_tripotent(u, tol, "classify_spin_tripotent");
  const Vector v = u.matrix().col(0);

  SpinClassification out{};
  if (norm(u) <= tol.bound(1.0)) {
    out.kind = SpinTripotentKind::zero;
    return out;
  }

  const cplx s = detail::coordinate_square_sum(v);  // lambda^2 for maximal, 0 for minimal
  if (std::abs(s) > 0.5) {
    // Maximal: u = lambda * a with a real. Recover lambda as a square root of
    // s, normalized by the phase convention.
    double half_arg = 0.5 * std::arg(s);
    cplx lambda = canonical_phase(cplx(std::cos(half_arg), std::sin(half_arg)));
    Vector w = std::conj(lambda) * v;
    Eigen::VectorXd a = w.real();
    if (w.imag().norm() > tol.bound(1.0))
      throw degeneracy_error("classify_spin_tripotent: maximal candidate is not a unimodular "
                             "multiple of a real vector");
    if (std::abs(a.norm() - 1.0) > tol.bound(1.0))
      throw degeneracy_error("classify_spin_tripotent: real direction of maximal tripotent is "
                             "not a unit vector");
    out.kind = SpinTripotentKind::maximal;
    out.lambda = lambda;
    out.a = a;
    return out;
  }

  // Minimal: 2u = a + i b with a, b orthonormal real vectors. The phase gauge
  // is fixed at lambda = 1 (any rotation of the (a,b)-plane gives another
  // valid pair).
  Eigen::VectorXd a = 2.0 * v.real();
  Eigen::VectorXd b = 2.0 * v.imag();
  if (std::abs(a.norm() - 1.0) > tol.bound(1.0) || std::abs(b.norm() - 1.0) > tol.bound(1.0) ||
      std::abs(a.dot(b)) > tol.bound(1.0))
    throw degeneracy_error("classify_spin_tripotent: minimal candidate does not split into an "
                           "orthonormal real pair");
  out.kind = SpinTripotentKind::minimal;
  out.lambda = cplx{1.0, 0.0};
  out.a = a;
  out.b = b;
  return out;
}

// The minimal tripotent (lambda/2)(a + i b) below the maximal tripotent
// u = lambda * a, for a real unit vector b orthogonal to a.
inline Element minimal_below(const Element& u, const Eigen::VectorXd& b, const Tolerance& tol = {}) {
  SpinClassification c = classify_spin_tripotent(u, tol);
  if (c.kind != SpinTripotentKind::maximal)
    throw precondition_error("minimal_below: u must be a maximal spin tripotent");
  if (b.size() != c.a.size()) throw shape_error("minimal_below: direction has wrong dimension");
  if (std::abs(b.norm() - 1.0) > tol.bound(1.0))
    throw precondition_error("minimal_below: b must be a unit vector");
  if (std::abs(c.a.dot(b)) > tol.bound(1.0))
    throw precondition_error("minimal_below: b must be orthogonal to the direction of u");
  Vector v = 0.5 * c.lambda * (c.a.cast<cplx>() + cplx(0.0, 1.0) * b.cast<cplx>());
  return Element(u.factor(), v);
}

// ---------------------------------------------------------------------------
// The 2x2 matrix model of spin(4).

inline Matrix pauli(int j) {
  Matrix s(2, 2);
  const cplx i{0.0, 1.0};
  switch (j) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -i, i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw precondition_error("pauli: index must be 0..3");
  }
  return s;
}

// Basis matrix ej^ = -i sigma_j (with e0^ = I).
inline Matrix spin_basis_matrix(int mu) {
  if (mu == 0) return pauli(0);
  return cplx(0.0, -1.0) * pauli(mu);
}

inline Matrix matrix_rep(const Element& x) {
  detail::require_spin4(x.factor(), "matrix_rep");
  const Vector v = x.matrix().col(0);
  const cplx i{0.0, 1.0};
  Matrix m(2, 2);
  m(0, 0) = v(0) - i * v(3);
  m(0, 1) = -v(2) - i * v(1);
  m(1, 0) = v(2) - i * v(1);
  m(1, 1) = v(0) + i * v(3);
  return m;
}

inline Element inverse_rep(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw shape_error("inverse_rep: expected a 2x2 matrix");
  const cplx i{0.0, 1.0};
  Vector v(4);
  v(0) = 0.5 * (m(0, 0) + m(1, 1));
  v(1) = 0.5 * i * (m(0, 1) + m(1, 0));
  v(2) = 0.5 * (m(1, 0) - m(0, 1));
  v(3) = 0.5 * i * (m(0, 0) - m(1, 1));
  return Element(FactorDescriptor::spin(4), v);
}

// sum_mu x_mu^2; for spin(4) this equals det(matrix_rep(x)).
inline cplx spin_determinant(const Element& x) {
  detail::require_spin(x.factor(), "spin_determinant");
  return detail::coordinate_square_sum(x.matrix().col(0));
}

// Hermitian embedding of a real 4-vector: a0*I + a1*sigma1 + a2*sigma2 + a3*sigma3.
// Its determinant is the Minkowski norm a0^2 - a1^2 - a2^2 - a3^2.
inline Matrix minkowski_embed(const Eigen::Vector4d& a) {
  Matrix m = Matrix::Zero(2, 2);
  for (int mu = 0; mu < 4; ++mu) m += a(mu) * pauli(mu);
  return m;
}

inline double minkowski_norm(const Eigen::Vector4d& a) {
  return a(0) * a(0) - a(1) * a(1) - a(2) * a(2) - a(3) * a(3);
}

// Qubit state with Bloch vector b (|b| <= 1) as a spin(4) element:
// (1/2)(I + sum_j b_j sigma_j) has spin coordinates (1/2, i b1/2, i b2/2, i b3/2).
// For |b| = 1 this is a minimal tripotent below the maximal tripotent e0.
inline Element spin_state(const Eigen::Vector3d& b) {
  if (b.norm() > 1.0 + 1e-12)
    throw precondition_error("spin_state: Bloch vector must have length <= 1");
  const cplx i{0.0, 1.0};
  Vector v(4);
  v(0) = 0.5;
  for (int j = 0; j < 3; ++j) v(1 + j) = 0.5 * i * b(j);
  return Element(FactorDescriptor::spin(4), v);
}

// Lorentz boost with the given rapidity along axis 1, 2, or 3, acting on the
// hermitian picture as X -> A X A with A = exp((rapidity/2) sigma_axis) =
// cosh(rapidity/2) I + sinh(rapidity/2) sigma_axis. det A = 1, so the spin
// determinant is preserved; tripotency generally is not.
inline Element lorentz_boost(const Element& x, double rapidity, int axis) {
  detail::require_spin4(x.factor(), "lorentz_boost");
  if (axis < 1 || axis > 3) throw precondition_error("lorentz_boost: axis must be 1, 2, or 3");
  Matrix a = std::cosh(0.5 * rapidity) * pauli(0) + std::sinh(0.5 * rapidity) * pauli(axis);
  return inverse_rep(a * matrix_rep(x) * a);
}

// Tripotent part of the polar decomposition of the matrix model: the partial
// isometry U_r V_r* from the SVD of matrix_rep(x), mapped back to spin(4).
inline Element polar_tripotent_part(const Element& x, const Tolerance& tol = {}) {
  detail::require_spin4(x.factor(), "polar_tripotent_part");
  Matrix m = matrix_rep(x);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double scale = sv.size() > 0 ? sv(0) : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.bound(scale)) ++r;
  Matrix w = svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
  return inverse_rep(w);
}

}  // namespace triplekit
