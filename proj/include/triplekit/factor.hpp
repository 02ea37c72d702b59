#pragma once

// Finite-dimensional Cartan factors and their elements.
//
// Supported factors:
//   rect(m,n)  complex m-by-n matrices,
//   skew(n)    antisymmetric n-by-n matrices (x^T = -x),
//   herm(n)    symmetric n-by-n matrices (x^T = x),
//   spin(d)    the d-dimensional spin factor (column vectors in C^d),
//   sum(...)   a finite l-infinity direct sum of the above.
//
// The matrix kinds carry the triple product {x,y,z} = (x y* z + z y* x)/2 and
// the operator norm. The spin factor carries
//   {x,y,z} = <x,y> z + <z,y> x - <x,z-bar> y-bar,
//   |x|^2   = <x,x> + sqrt(<x,x>^2 - |<x,x-bar>|^2),
// with <x,y> = sum x_i conj(y_i) and x-bar the coordinatewise conjugate.
// Sums take componentwise products and the max norm.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "triplekit/errors.hpp"
#include "triplekit/linalg.hpp"

namespace triplekit {

enum class FactorKind { rect, skew, herm, spin, sum };

inline const char* to_string(FactorKind k) {
  switch (k) {
    case FactorKind::rect: return "rect";
    case FactorKind::skew: return "skew";
    case FactorKind::herm: return "herm";
    case FactorKind::spin: return "spin";
    case FactorKind::sum: return "sum";
  }
  return "?";
}

class FactorDescriptor {
 public:
  static FactorDescriptor rect(int m, int n) {
    if (m < 1 || n < 1) throw shape_error("rect factor needs m, n >= 1");
    return FactorDescriptor(FactorKind::rect, m, n);
  }
  static FactorDescriptor skew(int n) {
    if (n < 2) throw shape_error("skew factor needs n >= 2");
    return FactorDescriptor(FactorKind::skew, n, n);
  }
  static FactorDescriptor herm(int n) {
    if (n < 1) throw shape_error("herm factor needs n >= 1");
    return FactorDescriptor(FactorKind::herm, n, n);
  }
  static FactorDescriptor spin(int d) {
    if (d < 3) throw shape_error("spin factor needs dimension >= 3");
    return FactorDescriptor(FactorKind::spin, d, 1);
  }
  // Direct sums are kept flat: nested sums are spliced into one component list.
  static FactorDescriptor sum(std::vector<FactorDescriptor> components) {
    std::vector<FactorDescriptor> flat;
    for (auto& c : components) {
      if (c.kind() == FactorKind::sum) {
        for (auto& cc : c.components()) flat.push_back(cc);
      } else {
        flat.push_back(c);
      }
    }
    if (flat.empty()) throw shape_error("sum factor needs at least one component");
    FactorDescriptor f(FactorKind::sum, 0, 0);
    f.components_ = std::make_shared<std::vector<FactorDescriptor>>(std::move(flat));
    return f;
  }

  FactorKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  // Spin-factor dimension d (only meaningful for spin factors).
  int spin_dim() const { return rows_; }
  const std::vector<FactorDescriptor>& components() const {
    static const std::vector<FactorDescriptor> none;
    return components_ ? *components_ : none;
  }

  bool is_matrix_kind() const {
    return kind_ == FactorKind::rect || kind_ == FactorKind::skew || kind_ == FactorKind::herm;
  }

  // Complex dimension of the factor as a vector space.
  int complex_dim() const {
    switch (kind_) {
      case FactorKind::rect: return rows_ * cols_;
      case FactorKind::skew: return rows_ * (rows_ - 1) / 2;
      case FactorKind::herm: return rows_ * (rows_ + 1) / 2;
      case FactorKind::spin: return rows_;
      case FactorKind::sum: {
        int d = 0;
        for (auto& c : components()) d += c.complex_dim();
        return d;
      }
    }
    return 0;
  }

  // Rank: the length of a maximal family of mutually orthogonal nonzero
  // tripotents, equivalently the maximal triple rank of an element.
  int rank() const {
    switch (kind_) {
      case FactorKind::rect: return std::min(rows_, cols_);
      case FactorKind::skew: return rows_ / 2;
      case FactorKind::herm: return rows_;
      case FactorKind::spin: return 2;
      case FactorKind::sum: {
        int r = 0;
        for (auto& c : components()) r += c.rank();
        return r;
      }
    }
    return 0;
  }

  // Whether the factor contains a unitary tripotent (one whose square Peirce
  // space is everything).
  bool has_unitary() const {
    switch (kind_) {
      case FactorKind::rect: return rows_ == cols_;
      case FactorKind::skew: return rows_ % 2 == 0;
      case FactorKind::herm: return true;
      case FactorKind::spin: return true;
      case FactorKind::sum: {
        for (auto& c : components())
          if (!c.has_unitary()) return false;
        return true;
      }
    }
    return false;
  }

  friend bool operator==(const FactorDescriptor& a, const FactorDescriptor& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == FactorKind::sum) {
      auto& ac = a.components();
      auto& bc = b.components();
      if (ac.size() != bc.size()) return false;
      for (size_t i = 0; i < ac.size(); ++i)
        if (!(ac[i] == bc[i])) return false;
      return true;
    }
    return a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }
  friend bool operator!=(const FactorDescriptor& a, const FactorDescriptor& b) { return !(a == b); }

  std::string describe() const {
    switch (kind_) {
      case FactorKind::rect: return "rect(" + std::to_string(rows_) + "," + std::to_string(cols_) + ")";
      case FactorKind::skew: return "skew(" + std::to_string(rows_) + ")";
      case FactorKind::herm: return "herm(" + std::to_string(rows_) + ")";
      case FactorKind::spin: return "spin(" + std::to_string(rows_) + ")";
      case FactorKind::sum: {
        std::string s = "sum(";
        bool first = true;
        for (auto& c : components()) {
          if (!first) s += ",";
          s += c.describe();
          first = false;
        }
        return s + ")";
      }
    }
    return "?";
  }

 private:
  FactorDescriptor(FactorKind k, int r, int c) : kind_(k), rows_(r), cols_(c) {}
  FactorKind kind_;
  int rows_, cols_;
  std::shared_ptr<std::vector<FactorDescriptor>> components_;
};

// Construction-time tolerance for subspace membership of skew/herm data.
inline constexpr double kConstructionTol = 1e-9;

class Element {
 public:
  // Matrix kinds and spin. Spin data is a d-by-1 column. Skew/herm data must
  // be (anti)symmetric within tolerance and is repaired by symmetrization.
  Element(FactorDescriptor factor, Matrix data) : factor_(std::move(factor)), data_(std::move(data)) {
    if (factor_.kind() == FactorKind::sum)
      throw shape_error("sum element needs a component list, not a matrix");
    if (data_.rows() != factor_.rows() || data_.cols() != factor_.cols())
      throw shape_error("element data has shape " + std::to_string(data_.rows()) + "x" +
                        std::to_string(data_.cols()) + ", factor " + factor_.describe());
    if (factor_.kind() == FactorKind::skew || factor_.kind() == FactorKind::herm) {
      const double sign = (factor_.kind() == FactorKind::herm) ? 1.0 : -1.0;
      Matrix sym = 0.5 * (data_ + sign * data_.transpose());
      double off = (data_ - sym).norm();
      double scale = std::max(1.0, data_.norm());
      if (off > kConstructionTol * scale)
        throw shape_error("matrix is not in the " + factor_.describe() + " subspace (residual " +
                          std::to_string(off) + ")");
      data_ = std::move(sym);
    }
  }

  Element(FactorDescriptor factor, std::vector<Element> parts)
      : factor_(std::move(factor)), parts_(std::move(parts)) {
    if (factor_.kind() != FactorKind::sum) throw shape_error("component list requires a sum factor");
    auto& comps = factor_.components();
    if (parts_.size() != comps.size()) throw shape_error("sum element has wrong number of components");
    for (size_t i = 0; i < comps.size(); ++i)
      if (parts_[i].factor() != comps[i])
        throw shape_error("sum component " + std::to_string(i) + " has mismatched factor");
  }

  static Element zero(const FactorDescriptor& f) {
    if (f.kind() == FactorKind::sum) {
      std::vector<Element> parts;
      for (auto& c : f.components()) parts.push_back(zero(c));
      return Element(f, std::move(parts));
    }
    return Element(f, Matrix::Zero(f.rows(), f.cols()));
  }

  const FactorDescriptor& factor() const { return factor_; }
  const Matrix& matrix() const {
    if (factor_.kind() == FactorKind::sum) throw shape_error("sum element has no single matrix");
    return data_;
  }
  const std::vector<Element>& parts() const {
    if (factor_.kind() != FactorKind::sum) throw shape_error("element is not a sum");
    return parts_;
  }

  // Coordinatewise conjugation (entrywise on matrices and spin coordinates,
  // componentwise on sums). Stays inside every factor kind.
  Element conj() const {
    if (factor_.kind() == FactorKind::sum) {
      std::vector<Element> parts;
      parts.reserve(parts_.size());
      for (auto& p : parts_) parts.push_back(p.conj());
      return Element(factor_, std::move(parts));
    }
    return Element(factor_, data_.conjugate());
  }

  friend Element operator+(const Element& a, const Element& b) {
    a.require_same_factor(b);
    if (a.factor_.kind() == FactorKind::sum) {
      std::vector<Element> parts;
      for (size_t i = 0; i < a.parts_.size(); ++i) parts.push_back(a.parts_[i] + b.parts_[i]);
      return Element(a.factor_, std::move(parts));
    }
    return Element(a.factor_, a.data_ + b.data_);
  }
  friend Element operator-(const Element& a, const Element& b) {
    a.require_same_factor(b);
    if (a.factor_.kind() == FactorKind::sum) {
      std::vector<Element> parts;
      for (size_t i = 0; i < a.parts_.size(); ++i) parts.push_back(a.parts_[i] - b.parts_[i]);
      return Element(a.factor_, std::move(parts));
    }
    return Element(a.factor_, a.data_ - b.data_);
  }
  friend Element operator*(const cplx& s, const Element& a) {
    if (a.factor_.kind() == FactorKind::sum) {
      std::vector<Element> parts;
      for (auto& p : a.parts_) parts.push_back(s * p);
      return Element(a.factor_, std::move(parts));
    }
    return Element(a.factor_, s * a.data_);
  }
  friend Element operator*(double s, const Element& a) { return cplx(s, 0.0) * a; }
  friend Element operator-(const Element& a) { return cplx(-1.0, 0.0) * a; }

  void require_same_factor(const Element& other) const {
    if (factor_ != other.factor_)
      throw shape_error("elements live in different factors: " + factor_.describe() + " vs " +
                        other.factor_.describe());
  }

 private:
  FactorDescriptor factor_;
  Matrix data_;                 // matrix kinds and spin
  std::vector<Element> parts_;  // sum kinds
};

// ---------------------------------------------------------------------------
// Canonical coordinates. vec() maps an element to its coefficient vector with
// respect to an orthonormal basis of the factor (Frobenius inner product for
// matrix kinds, the standard one for spin), unvec() inverts it, and basis()
// produces the k-th basis element. Sums concatenate component coordinates.

inline Vector vec(const Element& x);
inline Element unvec(const FactorDescriptor& f, const Vector& v);

namespace detail {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Index pairs (i,j), i<j, in a fixed row-major order.
inline std::vector<std::pair<int, int>> upper_pairs(int n) {
  std::vector<std::pair<int, int>> ps;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) ps.push_back({i, j});
  return ps;
}

}  // namespace detail

inline Vector vec(const Element& x) {
  const auto& f = x.factor();
  switch (f.kind()) {
    case FactorKind::rect: {
      const Matrix& a = x.matrix();
      Vector v(f.complex_dim());
      int k = 0;
      for (int j = 0; j < f.cols(); ++j)
        for (int i = 0; i < f.rows(); ++i) v(k++) = a(i, j);
      return v;
    }
    case FactorKind::herm: {
      const Matrix& a = x.matrix();
      const int n = f.rows();
      Vector v(f.complex_dim());
      int k = 0;
      for (int i = 0; i < n; ++i) v(k++) = a(i, i);
      for (auto [i, j] : detail::upper_pairs(n)) v(k++) = a(i, j) * std::sqrt(2.0);
      return v;
    }
    case FactorKind::skew: {
      const Matrix& a = x.matrix();
      Vector v(f.complex_dim());
      int k = 0;
      for (auto [i, j] : detail::upper_pairs(f.rows())) v(k++) = a(i, j) * std::sqrt(2.0);
      return v;
    }
    case FactorKind::spin:
      return x.matrix().col(0);
    case FactorKind::sum: {
      Vector v(f.complex_dim());
      int at = 0;
      for (auto& p : x.parts()) {
        Vector pv = vec(p);
        v.segment(at, pv.size()) = pv;
        at += static_cast<int>(pv.size());
      }
      return v;
    }
  }
  throw shape_error("vec: unknown factor kind");
}

inline Element unvec(const FactorDescriptor& f, const Vector& v) {
  if (v.size() != f.complex_dim())
    throw shape_error("unvec: coordinate vector has length " + std::to_string(v.size()) +
                      ", factor " + f.describe() + " needs " + std::to_string(f.complex_dim()));
  switch (f.kind()) {
    case FactorKind::rect: {
      Matrix a(f.rows(), f.cols());
      int k = 0;
      for (int j = 0; j < f.cols(); ++j)
        for (int i = 0; i < f.rows(); ++i) a(i, j) = v(k++);
      return Element(f, a);
    }
    case FactorKind::herm: {
      const int n = f.rows();
      Matrix a = Matrix::Zero(n, n);
      int k = 0;
      for (int i = 0; i < n; ++i) a(i, i) = v(k++);
      for (auto [i, j] : detail::upper_pairs(n)) {
        cplx c = v(k++) * detail::kInvSqrt2;
        a(i, j) = c;
        a(j, i) = c;
      }
      return Element(f, a);
    }
    case FactorKind::skew: {
      const int n = f.rows();
      Matrix a = Matrix::Zero(n, n);
      int k = 0;
      for (auto [i, j] : detail::upper_pairs(n)) {
        cplx c = v(k++) * detail::kInvSqrt2;
        a(i, j) = c;
        a(j, i) = -c;
      }
      return Element(f, a);
    }
    case FactorKind::spin:
      return Element(f, v);
    case FactorKind::sum: {
      std::vector<Element> parts;
      int at = 0;
      for (auto& c : f.components()) {
        parts.push_back(unvec(c, v.segment(at, c.complex_dim())));
        at += c.complex_dim();
      }
      return Element(f, std::move(parts));
    }
  }
  throw shape_error("unvec: unknown factor kind");
}

inline Element basis(const FactorDescriptor& f, int k) {
  Vector v = Vector::Zero(f.complex_dim());
  v(k) = 1.0;
  return unvec(f, v);
}

// Inner product of elements through their canonical coordinates,
// conjugate-linear in the second argument.
inline cplx inner(const Element& x, const Element& y) { return cdot(vec(x), vec(y)); }

// ---------------------------------------------------------------------------
// Triple product, quadratic map, norm.

inline Element triple_product(const Element& x, const Element& y, const Element& z) {
  x.require_same_factor(y);
  x.require_same_factor(z);
  const auto& f = x.factor();
  switch (f.kind()) {
    case FactorKind::rect:
    case FactorKind::skew:
    case FactorKind::herm: {
      // {x,y,z} = (x y* z + z y* x)/2. The two terms are formed separately and
      // added, so swapping x and z gives the identical floating-point result.
      Matrix a = x.matrix() * y.matrix().adjoint() * z.matrix();
      Matrix b = z.matrix() * y.matrix().adjoint() * x.matrix();
      return Element(f, 0.5 * (a + b));
    }
    case FactorKind::spin: {
      const Vector xv = x.matrix().col(0);
      const Vector yv = y.matrix().col(0);
      const Vector zv = z.matrix().col(0);
      cplx s1 = cdot(xv, yv);
      cplx s2 = cdot(zv, yv);
      cplx s3{0.0, 0.0};  // <x, z-bar> = sum x_i z_i, symmetric term by term
      for (Eigen::Index i = 0; i < xv.size(); ++i) s3 += xv(i) * zv(i);
      Vector r = s1 * zv + s2 * xv - s3 * yv.conjugate();
      return Element(f, r);
    }
    case FactorKind::sum: {
      std::vector<Element> parts;
      for (size_t i = 0; i < x.parts().size(); ++i)
        parts.push_back(triple_product(x.parts()[i], y.parts()[i], z.parts()[i]));
      return Element(f, std::move(parts));
    }
  }
  throw shape_error("triple_product: unknown factor kind");
}

// Q(e)x = {e,x,e}, the (conjugate-linear) quadratic map.
inline Element quadratic_map(const Element& e, const Element& x) { return triple_product(e, x, e); }

inline double norm(const Element& x) {
  const auto& f = x.factor();
  switch (f.kind()) {
    case FactorKind::rect:
    case FactorKind::skew:
    case FactorKind::herm:
      return operator_norm(x.matrix());
    case FactorKind::spin: {
      const Vector v = x.matrix().col(0);
      double q = std::real(cdot(v, v));  // <x,x> is real and >= 0
      cplx det{0.0, 0.0};                // <x,x-bar> = sum x_i^2
      for (Eigen::Index i = 0; i < v.size(); ++i) det += v(i) * v(i);
      double disc = q * q - std::norm(det);
      if (disc < 0.0) disc = 0.0;  // clip rounding noise
      return std::sqrt(q + std::sqrt(disc));
    }
    case FactorKind::sum: {
      double m = 0.0;
      for (auto& p : x.parts()) m = std::max(m, norm(p));
      return m;
    }
  }
  throw shape_error("norm: unknown factor kind");
}

// ---------------------------------------------------------------------------
// Seeded random elements: i.i.d. complex Gaussian coordinates, symmetrized or
// antisymmetrized for herm/skew. Deterministic for a fixed seed.

inline Element random_element(const FactorDescriptor& f, Rng& rng) {
  switch (f.kind()) {
    case FactorKind::rect:
    case FactorKind::spin:
      return Element(f, complex_gaussian_matrix(f.rows(), f.cols(), rng));
    case FactorKind::herm: {
      Matrix a = complex_gaussian_matrix(f.rows(), f.cols(), rng);
      return Element(f, 0.5 * (a + a.transpose()).eval());
    }
    case FactorKind::skew: {
      Matrix a = complex_gaussian_matrix(f.rows(), f.cols(), rng);
      return Element(f, 0.5 * (a - a.transpose()).eval());
    }
    case FactorKind::sum: {
      std::vector<Element> parts;
      for (auto& c : f.components()) parts.push_back(random_element(c, rng));
      return Element(f, std::move(parts));
    }
  }
  throw shape_error("random_element: unknown factor kind");
}

inline Element random_element(const FactorDescriptor& f, std::uint64_t seed) {
  Rng rng(seed);
  return random_element(f, rng);
}

}  // namespace triplekit
