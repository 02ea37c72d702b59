#pragma once

// Tripotent calculus: the partial order and orthogonality on tripotents,
// Peirce decompositions, rank classification, collinearity / governing,
// quadrangles and trangles, and seeded tripotent samplers.
//
// An element e is a tripotent when {e,e,e} = e. Writing L(a,b)x = {a,b,x} and
// Q(a)x = {a,x,a}, the Peirce projections of a tripotent e are
//   P2 = Q(e)^2,  P1 = 2(L(e,e) - Q(e)^2),  P0 = Id - 2 L(e,e) + Q(e)^2,
// the spectral projections of L(e,e) for the eigenvalues 1, 1/2, 0. Both
// constructions are computed and cross-checked.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "triplekit/factor.hpp"

namespace triplekit {

struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;
  double bound(double scale = 1.0) const { return abs + rel * std::max(1.0, scale); }
  bool pass(double residual, double scale = 1.0) const { return residual <= bound(scale); }
};

inline double tripotent_residual(const Element& e) { return norm(triple_product(e, e, e) - e); }

inline bool is_tripotent(const Element& e, const Tolerance& tol = {}) {
  double n = norm(e);
  return tol.pass(tripotent_residual(e), std::max(n, n * n * n));
}

inline void require_tripotent(const Element& e, const Tolerance& tol, const char* who) {
  if (!is_tripotent(e, tol))
    throw precondition_error(std::string(who) + ": argument is not a tripotent (residual " +
                             std::to_string(tripotent_residual(e)) + ")");
}

// Residual of membership of x in the Peirce-k space of e: |L(e,e)x - (k/2) x|.
inline double peirce_residual(const Element& e, const Element& x, int k) {
  return norm(triple_product(e, e, x) - (0.5 * k) * x);
}

// e and u are orthogonal when L(e,u) = 0; for tripotents this is equivalent
// to {e,e,u} = 0. Both directions are checked.
inline bool is_orthogonal(const Element& e, const Element& u, const Tolerance& tol = {}) {
  require_tripotent(e, tol, "is_orthogonal");
  require_tripotent(u, tol, "is_orthogonal");
  double scale = std::max(norm(e), norm(u));
  return tol.pass(norm(triple_product(e, e, u)), scale) &&
         tol.pass(norm(triple_product(u, u, e)), scale);
}

// e <= u iff u - e is a tripotent orthogonal to e.
inline bool leq(const Element& e, const Element& u, const Tolerance& tol = {}) {
  require_tripotent(e, tol, "leq");
  require_tripotent(u, tol, "leq");
  Element d = u - e;
  if (!is_tripotent(d, tol)) return false;
  double scale = std::max(norm(e), norm(d));
  return tol.pass(norm(triple_product(d, d, e)), scale) &&
         tol.pass(norm(triple_product(e, e, d)), scale);
}

// ---------------------------------------------------------------------------
// Peirce decomposition.

namespace detail {

// Matrix of a complex-linear operator in canonical coordinates.
template <typename Op>
Matrix operator_matrix(const FactorDescriptor& f, Op&& op) {
  const int d = f.complex_dim();
  Matrix m(d, d);
  for (int k = 0; k < d; ++k) m.col(k) = vec(op(basis(f, k)));
  return m;
}

}  // namespace detail

struct PeirceData {
  Element e;
  std::array<int, 3> dims;  // (d2, d1, d0)
  // Spectral projections of L(e,e), and the closed polynomial forms, both as
  // matrices acting on canonical coordinates.
  Matrix P2, P1, P0;
  Matrix P2_closed, P1_closed, P0_closed;
  // Orthonormal coordinate bases of the three Peirce spaces (columns).
  Matrix basis2, basis1, basis0;

  const Matrix& projection(int k, bool closed_form = false) const {
    switch (k) {
      case 2: return closed_form ? P2_closed : P2;
      case 1: return closed_form ? P1_closed : P1;
      case 0: return closed_form ? P0_closed : P0;
    }
    throw precondition_error("Peirce projection index must be 0, 1, or 2");
  }

  Element project(int k, const Element& x, bool closed_form = false) const {
    return unvec(e.factor(), projection(k, closed_form) * vec(x));
  }

  // Largest deviation between the two construction paths.
  double agreement() const {
    return std::max({(P2 - P2_closed).norm(), (P1 - P1_closed).norm(), (P0 - P0_closed).norm()});
  }
};

// Eigenvalues of L(e,e) may only be 0, 1/2, 1; anything farther than this
// from the grid is reported as numerically degenerate.
inline constexpr double kPeirceEigenvalueTol = 1e-6;

inline PeirceData peirce(const Element& e, const Tolerance& tol = {}) {
  require_tripotent(e, tol, "peirce");
  const auto& f = e.factor();
  const int d = f.complex_dim();

  Matrix L = detail::operator_matrix(f, [&](const Element& x) { return triple_product(e, e, x); });
  Matrix Q = detail::operator_matrix(f, [&](const Element& x) { return triple_product(e, x, e); });
  // Q(e) is conjugate-linear, so Q(e)^2 acts linearly with matrix Q * conj(Q).
  Matrix P2c = Q * Q.conjugate();

  PeirceData out{e, {0, 0, 0}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  out.P2_closed = P2c;
  out.P1_closed = 2.0 * (L - P2c);
  out.P0_closed = Matrix::Identity(d, d) - 2.0 * L + P2c;

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (L + L.adjoint()));
  if (es.info() != Eigen::Success) throw degeneracy_error("peirce: eigensolver failed");
  const auto& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();

  std::vector<int> cols2, cols1, cols0;
  for (int i = 0; i < d; ++i) {
    double v = vals(i);
    int snapped = -1;
    if (std::abs(v - 1.0) <= kPeirceEigenvalueTol) snapped = 2;
    else if (std::abs(v - 0.5) <= kPeirceEigenvalueTol) snapped = 1;
    else if (std::abs(v) <= kPeirceEigenvalueTol) snapped = 0;
    if (snapped < 0)
      throw degeneracy_error("peirce: eigenvalue " + std::to_string(v) +
                             " of L(e,e) is not within " + std::to_string(kPeirceEigenvalueTol) +
                             " of {0, 1/2, 1}");
    (snapped == 2 ? cols2 : snapped == 1 ? cols1 : cols0).push_back(i);
  }

  auto gather = [&](const std::vector<int>& cols) {
    Matrix b(d, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) b.col(static_cast<int>(j)) = vecs.col(cols[j]);
    return b;
  };
  out.basis2 = gather(cols2);
  out.basis1 = gather(cols1);
  out.basis0 = gather(cols0);
  out.dims = {static_cast<int>(cols2.size()), static_cast<int>(cols1.size()),
              static_cast<int>(cols0.size())};
  out.P2 = out.basis2 * out.basis2.adjoint();
  out.P1 = out.basis1 * out.basis1.adjoint();
  out.P0 = out.basis0 * out.basis0.adjoint();

  if (out.agreement() > kPeirceEigenvalueTol)
    throw degeneracy_error("peirce: eigenprojections and closed forms disagree by " +
                           std::to_string(out.agreement()));
  return out;
}

// ---------------------------------------------------------------------------
// Classification.

enum class TripotentClass { zero, minimal, complete, unitary, intermediate };

inline const char* to_string(TripotentClass c) {
  switch (c) {
    case TripotentClass::zero: return "zero";
    case TripotentClass::minimal: return "minimal";
    case TripotentClass::complete: return "complete";
    case TripotentClass::unitary: return "unitary";
    case TripotentClass::intermediate: return "intermediate";
  }
  return "?";
}

struct Classification {
  TripotentClass category;
  int rank;                 // number of mutually orthogonal minimal tripotents summing to e
  std::array<int, 3> dims;  // Peirce dimensions (d2, d1, d0)
  bool minimal, complete, unitary;
};

namespace detail {

inline int triple_rank(const Element& e, const Tolerance& tol) {
  const auto& f = e.factor();
  switch (f.kind()) {
    case FactorKind::rect:
    case FactorKind::herm:
    case FactorKind::skew: {
      Eigen::JacobiSVD<Matrix> svd(e.matrix());
      const auto& sv = svd.singularValues();
      int units = 0;
      double scale = sv.size() > 0 ? sv(0) : 0.0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.bound(scale)) ++units;
      // Skew tripotents decompose into rank-2 blocks, one minimal tripotent each.
      return f.kind() == FactorKind::skew ? units / 2 : units;
    }
    case FactorKind::spin: {
      double n = norm(e);
      if (n <= tol.bound(1.0)) return 0;
      // |sum u_i^2| is 1 for maximal tripotents and 0 for minimal ones.
      const Vector v = e.matrix().col(0);
      cplx det{0.0, 0.0};
      for (Eigen::Index i = 0; i < v.size(); ++i) det += v(i) * v(i);
      return std::abs(det) > 0.5 ? 2 : 1;
    }
    case FactorKind::sum: {
      int r = 0;
      for (auto& p : e.parts()) r += triple_rank(p, tol);
      return r;
    }
  }
  return 0;
}

}  // namespace detail

inline Classification classify(const Element& e, const Tolerance& tol = {}) {
  PeirceData pd = peirce(e, tol);  // also enforces the tripotent precondition
  const int D = e.factor().complex_dim();
  Classification c{};
  c.dims = pd.dims;
  c.rank = detail::triple_rank(e, tol);
  const bool zero = (pd.dims[0] == 0 && pd.dims[1] == 0);
  c.minimal = (pd.dims[0] == 1);
  c.complete = !zero && (pd.dims[2] == 0);
  c.unitary = (pd.dims[0] == D);
  if (zero) c.category = TripotentClass::zero;
  else if (c.unitary) c.category = TripotentClass::unitary;
  else if (c.minimal) c.category = TripotentClass::minimal;
  else if (c.complete) c.category = TripotentClass::complete;
  else c.category = TripotentClass::intermediate;
  return c;
}

// ---------------------------------------------------------------------------
// Collinearity, governing, quadrangles, trangles.

// u and v are collinear when each lies in the other's Peirce-1 space.
inline bool is_collinear(const Element& u, const Element& v, const Tolerance& tol = {}) {
  require_tripotent(u, tol, "is_collinear");
  require_tripotent(v, tol, "is_collinear");
  return tol.pass(peirce_residual(u, v, 1), norm(v)) &&
         tol.pass(peirce_residual(v, u, 1), norm(u));
}

// u governs v when v lies in the Peirce-2 space of u and u lies in the
// Peirce-1 space of v.
inline bool governs(const Element& u, const Element& v, const Tolerance& tol = {}) {
  require_tripotent(u, tol, "governs");
  require_tripotent(v, tol, "governs");
  return tol.pass(peirce_residual(u, v, 2), norm(v)) &&
         tol.pass(peirce_residual(v, u, 1), norm(u));
}

namespace detail {

inline bool is_minimal(const Element& e, const Tolerance& tol) {
  return classify(e, tol).minimal;
}

}  // namespace detail

// Ordered quadrangle (u1,u2,u3,u4) of minimal tripotents: u1 _|_ u3, u2 _|_ u4,
// consecutive entries collinear (cyclically), and u4 = 2{u1,u2,u3}.
inline bool is_quadrangle(const Element& u1, const Element& u2, const Element& u3,
                          const Element& u4, const Tolerance& tol = {}) {
  for (const Element* u : {&u1, &u2, &u3, &u4}) require_tripotent(*u, tol, "is_quadrangle");
  for (const Element* u : {&u1, &u2, &u3, &u4})
    if (!detail::is_minimal(*u, tol)) return false;
  if (!is_orthogonal(u1, u3, tol) || !is_orthogonal(u2, u4, tol)) return false;
  if (!is_collinear(u1, u2, tol) || !is_collinear(u2, u3, tol) || !is_collinear(u3, u4, tol) ||
      !is_collinear(u4, u1, tol))
    return false;
  Element closing = 2.0 * triple_product(u1, u2, u3);
  return tol.pass(norm(u4 - closing), 1.0);
}

// Trangle (v, u, v~): v and v~ minimal and orthogonal, u governs both, and
// v = Q(u) v~.
inline bool is_trangle(const Element& v, const Element& u, const Element& vt,
                       const Tolerance& tol = {}) {
  for (const Element* w : {&v, &u, &vt}) require_tripotent(*w, tol, "is_trangle");
  if (!detail::is_minimal(v, tol) || !detail::is_minimal(vt, tol)) return false;
  if (!is_orthogonal(v, vt, tol)) return false;
  if (!governs(u, v, tol) || !governs(u, vt, tol)) return false;
  return tol.pass(norm(v - quadratic_map(u, vt)), 1.0);
}

// ---------------------------------------------------------------------------
// Scalar multiples below a tripotent. Returns the unimodular gamma with
// gamma*v <= u, which exists iff P2(v)u = gamma*v and P1(v)u = 0.
inline std::optional<cplx> scalar_multiple_below(const Element& u, const Element& v,
                                                 const Tolerance& tol = {}) {
  require_tripotent(u, tol, "scalar_multiple_below");
  require_tripotent(v, tol, "scalar_multiple_below");
  if (norm(v) <= tol.bound(1.0))
    throw precondition_error("scalar_multiple_below: v must be nonzero");
  // Closed Peirce forms relative to v, applied to u.
  Element Qu = quadratic_map(v, u);
  Element p2u = quadratic_map(v, Qu);  // Q(v)^2 u
  Element p1u = 2.0 * (triple_product(v, v, u) - p2u);
  cplx gamma = inner(p2u, v) / inner(v, v);
  double scale = std::max(1.0, norm(u));
  if (!tol.pass(norm(p2u - gamma * v), scale)) return std::nullopt;
  if (!tol.pass(norm(p1u), scale)) return std::nullopt;
  double m = std::abs(gamma);
  if (std::abs(m - 1.0) > tol.bound(scale)) return std::nullopt;
  return gamma / m;
}

// Sum of pairwise orthogonal tripotents; the result is again a tripotent.
inline Element orthogonal_sum(const std::vector<Element>& es, const Tolerance& tol = {}) {
  if (es.empty()) throw precondition_error("orthogonal_sum: empty list");
  for (auto& e : es) require_tripotent(e, tol, "orthogonal_sum");
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j)
      if (!is_orthogonal(es[i], es[j], tol))
        throw precondition_error("orthogonal_sum: entries " + std::to_string(i) + " and " +
                                 std::to_string(j) + " are not orthogonal");
  Element s = es[0];
  for (size_t i = 1; i < es.size(); ++i) s = s + es[i];
  if (!is_tripotent(s, tol))
    throw precondition_error("orthogonal_sum: sum failed the tripotent check");
  return s;
}

// ---------------------------------------------------------------------------
// Seeded tripotent samplers.

namespace detail {

inline Matrix skew_block_form(int n, int pairs) {
  Matrix j = Matrix::Zero(n, n);
  for (int k = 0; k < pairs; ++k) {
    j(2 * k, 2 * k + 1) = 1.0;
    j(2 * k + 1, 2 * k) = -1.0;
  }
  return j;
}

}  // namespace detail

// Random tripotent of the requested triple rank (0 <= rank <= factor rank).
inline Element random_tripotent(const FactorDescriptor& f, int rank, Rng& rng) {
  if (rank < 0 || rank > f.rank())
    throw precondition_error("random_tripotent: rank " + std::to_string(rank) +
                             " out of range for " + f.describe());
  if (rank == 0) return Element::zero(f);
  switch (f.kind()) {
    case FactorKind::rect: {
      // Partial isometry from the SVD of a Gaussian matrix.
      Matrix a = complex_gaussian_matrix(f.rows(), f.cols(), rng);
      Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
      Matrix w = svd.matrixU().leftCols(rank) * svd.matrixV().leftCols(rank).adjoint();
      return Element(f, w);
    }
    case FactorKind::herm: {
      Matrix u = haar_unitary(f.rows(), rng).leftCols(rank);
      return Element(f, (u * u.transpose()).eval());
    }
    case FactorKind::skew: {
      Matrix u = haar_unitary(f.rows(), rng);
      Matrix j = detail::skew_block_form(f.rows(), rank);
      return Element(f, (u * j * u.transpose()).eval());
    }
    case FactorKind::spin: {
      const int d = f.spin_dim();
      cplx lambda = random_phase(rng);
      if (rank == 2) {
        Eigen::VectorXd a = real_gaussian_matrix(d, 1, rng);
        a.normalize();
        return Element(f, (lambda * a.cast<cplx>()).eval());
      }
      auto [a, b] = random_orthonormal_pair(d, rng);
      Vector v = 0.5 * lambda * (a.cast<cplx>() + cplx(0.0, 1.0) * b.cast<cplx>());
      return Element(f, v);
    }
    case FactorKind::sum: {
      // Distribute the rank over components, uniformly among valid splits.
      const auto& comps = f.components();
      std::vector<int> ranks(comps.size(), 0);
      int remaining = rank;
      for (size_t i = 0; i < comps.size(); ++i) {
        int tail = 0;
        for (size_t j = i + 1; j < comps.size(); ++j) tail += comps[j].rank();
        int lo = std::max(0, remaining - tail);
        int hi = std::min(comps[i].rank(), remaining);
        std::uniform_int_distribution<int> pick(lo, hi);
        ranks[i] = pick(rng);
        remaining -= ranks[i];
      }
      std::vector<Element> parts;
      for (size_t i = 0; i < comps.size(); ++i)
        parts.push_back(random_tripotent(comps[i], ranks[i], rng));
      return Element(f, std::move(parts));
    }
  }
  throw shape_error("random_tripotent: unknown factor kind");
}

// Random tripotent with rank drawn uniformly from 1..rank(f).
inline Element random_tripotent(const FactorDescriptor& f, Rng& rng) {
  std::uniform_int_distribution<int> pick(1, f.rank());
  return random_tripotent(f, pick(rng), rng);
}

}  // namespace triplekit
