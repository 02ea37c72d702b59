// Rectangular grids of matrix units: axioms, violations, and linear
// extensions from grid images.

#include <catch2/catch_amalgamated.hpp>

#include "triplekit/grid.hpp"
#include "triplekit/oracle.hpp"
#include "triplekit/reconstruction.hpp"

using namespace triplekit;

TEST_CASE("the matrix-unit grid satisfies all three axiom families") {
  RectGrid g = rectangular_grid(3, 4);
  REQUIRE(g.cells.size() == 12);
  GridReport rep = verify_rectangular_grid(g);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
  CHECK(rep.checks > 100);

  // Spot checks of the axiom content.
  CHECK(is_collinear(g.cell(0, 0), g.cell(0, 1)));  // shared row
  CHECK(is_collinear(g.cell(0, 0), g.cell(1, 0)));  // shared column
  CHECK(is_orthogonal(g.cell(0, 0), g.cell(1, 1)));
  Element closing = 2.0 * triple_product(g.cell(1, 2), g.cell(1, 3), g.cell(0, 3));
  CHECK(norm(g.cell(0, 2) - closing) < 1e-14);
}

TEST_CASE("a sign flip in one cell is caught by the closing identity") {
  RectGrid g = rectangular_grid(2, 2);
  g.cells[0] = -1.0 * g.cells[0];
  GridReport rep = verify_rectangular_grid(g);
  REQUIRE_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().axiom == "quadrangle");
}

TEST_CASE("a non-minimal cell is rejected before the pairwise axioms") {
  RectGrid g = rectangular_grid(2, 3);
  g.cells[0] = g.cell(0, 0) + g.cell(1, 1);
  GridReport rep = verify_rectangular_grid(g);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violations.front().axiom == "minimality");
}

TEST_CASE("a cell replaced by a wrong-row unit breaks collinearity or orthogonality") {
  RectGrid g = rectangular_grid(2, 2);
  g.cells[3] = g.cell(0, 0);  // duplicate of the (0,0) cell in slot (1,1)
  GridReport rep = verify_rectangular_grid(g);
  REQUIRE_FALSE(rep.ok);
  bool pairwise = false;
  for (const auto& v : rep.violations)
    pairwise = pairwise || v.axiom == "collinearity" || v.axiom == "orthogonality";
  CHECK(pairwise);
}

TEST_CASE("grid images under a product map still form a grid") {
  RealLinearMap truth = rect_product_map(2, 3, 17, RectForm::plain);
  RectGrid g = rectangular_grid(2, 3);
  std::vector<Element> images;
  for (const auto& c : g.cells) images.push_back(truth.apply(c));
  RectGrid img{truth.target, 2, 3, images};
  CHECK(verify_rectangular_grid(img).ok);
}

TEST_CASE("grid linear extension reproduces the identity and rejects bad frames") {
  RectGrid g = rectangular_grid(2, 3);
  RealLinearMap id = grid_linear_extension(g, g.cells, Branch::linear);
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    Element x = random_element(g.factor, rng);
    CHECK(norm(id.apply(x) - x) < 1e-12);
  }

  // Images that are not orthonormal in the coordinate inner product fail.
  std::vector<Element> bad = g.cells;
  bad[1] = bad[0];
  CHECK_THROWS_AS(grid_linear_extension(g, bad, Branch::linear), structure_error);
}

TEST_CASE("an antilinear extension conjugates coordinates") {
  RectGrid g = rectangular_grid(2, 2);
  RealLinearMap conj_map = grid_linear_extension(g, g.cells, Branch::antilinear);
  const cplx i{0, 1};
  Element x = i * g.cell(0, 0);
  CHECK(norm(conj_map.apply(x) - (-i) * g.cell(0, 0)) < 1e-14);
}

TEST_CASE("extension verification flags a map that disagrees with its oracle") {
  auto r22 = FactorDescriptor::rect(2, 2);
  RealLinearMap transpose_map = RealLinearMap::from_function(
      r22, r22, Branch::linear,
      [&](const Element& x) { return Element(r22, x.matrix().transpose().eval()); });
  TripotentOracle oracle = make_oracle(transpose_map);
  ExtensionReport good = verify_extension(transpose_map, oracle, 100, 4);
  CHECK(good.ok);
  CHECK(good.max_tripotent_residual < 1e-10);
  CHECK(good.max_triple_residual < 1e-10);

  ExtensionReport bad = verify_extension(identity_map(r22), oracle, 100, 4);
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_tripotent_residual >= 0.9);
}
