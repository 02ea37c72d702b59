#pragma once

// Rectangular grids: m-by-n families of minimal tripotents u_ij such that
//   (i)   two distinct cells sharing a row or a column are collinear, and
//         cells sharing neither are orthogonal,
//   (ii)  (u_jk, u_jl, u_il, u_ik) is a quadrangle whenever i != j, k != l,
//   (iii) all triple products not forced by (i)/(ii) vanish.
// The matrix units E_ij form such a grid in rect(m,n), and a verified grid
// determines a real-linear extension of any cellwise correspondence.

#include <string>
#include <vector>

#include "triplekit/linear_map.hpp"
#include "triplekit/tripotent.hpp"

namespace triplekit {

struct RectGrid {
  FactorDescriptor factor = FactorDescriptor::rect(1, 1);
  int m = 0, n = 0;
  std::vector<Element> cells;  // row-major, cells[i*n + j] = u_ij

  const Element& cell(int i, int j) const { return cells.at(static_cast<size_t>(i) * n + j); }
};

// The canonical grid of matrix units in rect(m,n).
inline RectGrid rectangular_grid(int m, int n) {
  FactorDescriptor f = FactorDescriptor::rect(m, n);
  RectGrid g{f, m, n, {}};
  g.cells.reserve(static_cast<size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(m, n);
      e(i, j) = 1.0;
      g.cells.emplace_back(f, e);
    }
  return g;
}

struct GridViolation {
  std::string axiom;  // "tripotent", "minimality", "collinearity", "orthogonality",
                      // "quadrangle", or "vanishing"
  std::vector<int> indices;
  double residual = 0.0;
};

struct GridReport {
  bool ok = true;
  std::vector<GridViolation> violations;
  int checks = 0;
};

// Verify the grid axioms. Axiom (iii) is checked against the structure
// constants {u_ab, u_cd, u_ef} = (1/2)(delta_bd delta_ce u_af +
// delta_fd delta_ca u_eb): every triple whose predicted value is zero must
// vanish. All triples are enumerated for grids with up to 16 cells; larger
// grids use a seeded sample.
inline GridReport verify_rectangular_grid(const RectGrid& g, const Tolerance& tol = {},
                                          std::uint64_t seed = 0) {
  GridReport rep;
  auto fail = [&](std::string axiom, std::vector<int> idx, double residual) {
    rep.ok = false;
    rep.violations.push_back(GridViolation{std::move(axiom), std::move(idx), residual});
  };

  const int m = g.m, n = g.n;
  if (static_cast<int>(g.cells.size()) != m * n)
    throw shape_error("verify_rectangular_grid: expected " + std::to_string(m * n) + " cells");

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const Element& u = g.cell(i, j);
      ++rep.checks;
      double tr = tripotent_residual(u);
      if (!tol.pass(tr, 1.0)) {
        fail("tripotent", {i, j}, tr);
        continue;
      }
      if (!classify(u, tol).minimal) fail("minimality", {i, j}, 0.0);
    }
  if (!rep.ok) return rep;  // relation checks assume tripotent cells

  // Axiom (i): collinear on a shared row or column, orthogonal otherwise.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < n; ++l) {
          if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
          const Element& a = g.cell(i, j);
          const Element& b = g.cell(k, l);
          ++rep.checks;
          bool shared = (i == k) != (j == l);  // exactly one common index
          if (shared) {
            if (!is_collinear(a, b, tol))
              fail("collinearity", {i, j, k, l},
                   std::max(peirce_residual(a, b, 1), peirce_residual(b, a, 1)));
          } else {
            if (!is_orthogonal(a, b, tol))
              fail("orthogonality", {i, j, k, l},
                   std::max(norm(triple_product(a, a, b)), norm(triple_product(b, b, a))));
          }
        }

  // Axiom (ii): closing quadrangle identity u_ik = 2{u_jk, u_jl, u_il}. The
  // collinearity/orthogonality content of the quadrangle is axiom (i) above.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (i == j || k == l) continue;
          ++rep.checks;
          Element closing = 2.0 * triple_product(g.cell(j, k), g.cell(j, l), g.cell(i, l));
          double r = norm(g.cell(i, k) - closing);
          if (!tol.pass(r, 1.0)) fail("quadrangle", {j, k, j, l, i, l, i, k}, r);
        }

  // Axiom (iii): predicted-zero triple products vanish.
  auto check_vanishing = [&](int a, int b, int c, int d, int e, int f) {
    bool first = (b == d) && (c == e);
    bool second = (f == d) && (c == a);
    if (first || second) return;  // nonzero prediction, covered by (i)/(ii)
    ++rep.checks;
    double r = norm(triple_product(g.cell(a, b), g.cell(c, d), g.cell(e, f)));
    if (!tol.pass(r, 1.0)) fail("vanishing", {a, b, c, d, e, f}, r);
  };
  const int cells = m * n;
  if (cells <= 16) {
    for (int p = 0; p < cells; ++p)
      for (int q = 0; q < cells; ++q)
        for (int r = 0; r < cells; ++r)
          check_vanishing(p / n, p % n, q / n, q % n, r / n, r % n);
  } else {
    Rng rng(seed);
    std::uniform_int_distribution<int> pick(0, cells - 1);
    for (int t = 0; t < 4096; ++t) {
      int p = pick(rng), q = pick(rng), r = pick(rng);
      check_vanishing(p / n, p % n, q / n, q % n, r / n, r % n);
    }
  }
  return rep;
}

// Real-linear extension of a cellwise correspondence: the source cells are an
// orthonormal family, so x = sum x_ij u_ij has coefficients x_ij = <x, u_ij>,
// and the extension maps x to sum g(x_ij) image_ij with g = id or conj.
inline RealLinearMap grid_linear_extension(const RectGrid& source,
                                           const std::vector<Element>& images, Branch branch,
                                           const Tolerance& tol = {}) {
  const size_t cells = source.cells.size();
  if (images.size() != cells)
    throw shape_error("grid_linear_extension: " + std::to_string(images.size()) +
                      " images for " + std::to_string(cells) + " cells");
  for (auto& im : images) im.require_same_factor(images[0]);
  const FactorDescriptor& target = images[0].factor();

  // Orthonormality of the source cells is what makes coefficient extraction
  // valid, and any triple-isomorphic image family must stay orthonormal in
  // the coordinate inner product; either failure means the input is not a
  // rectangular grid (or its image under such a map).
  const double gram_tol = std::sqrt(tol.bound(1.0));
  for (size_t p = 0; p < cells; ++p)
    for (size_t q = p; q < cells; ++q) {
      double want = (p == q) ? 1.0 : 0.0;
      if (std::abs(inner(source.cells[p], source.cells[q]) - cplx(want, 0.0)) > gram_tol)
        throw structure_error("grid_linear_extension: source cells are not orthonormal");
      if (std::abs(inner(images[p], images[q]) - cplx(want, 0.0)) > gram_tol)
        throw structure_error("grid_linear_extension: image cells are not orthonormal");
    }

  Matrix L = Matrix::Zero(target.complex_dim(), source.factor.complex_dim());
  for (size_t c = 0; c < cells; ++c) {
    Vector img = vec(images[c]);
    Vector cell = vec(source.cells[c]);
    if (branch == Branch::linear)
      L += img * cell.adjoint();
    else
      L += img * cell.transpose();
  }
  return RealLinearMap::single(source.factor, target, branch, std::move(L));
}

}  // namespace triplekit
