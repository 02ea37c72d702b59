// Reconstruction of real-linear triple isomorphisms from tripotent oracles:
// phase maps, branch detection, spin and rectangular recovery, direct-sum
// routing, automorphism classification, and the preservation checker.

#include <catch2/catch_amalgamated.hpp>

#include "triplekit/reconstruction.hpp"

using namespace triplekit;

namespace {

const cplx I{0.0, 1.0};

Element unit(const FactorDescriptor& f, int i, int j) {
  Matrix m = Matrix::Zero(f.rows(), f.cols());
  m(i, j) = 1.0;
  return Element(f, m);
}

double map_distance(const RealLinearMap& a, const RealLinearMap& b, std::uint64_t seed) {
  REQUIRE(a.domain == b.domain);
  Rng rng(seed);
  double worst = 0;
  for (int s = 0; s < 25; ++s) {
    Element x = random_element(a.domain, rng);
    worst = std::max(worst, norm(a.apply(x) - b.apply(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("oracles verify their own images") {
  auto r22 = FactorDescriptor::rect(2, 2);
  TripotentOracle good = make_oracle(identity_map(r22));
  CHECK(norm(good(unit(r22, 0, 0)) - unit(r22, 0, 0)) < 1e-15);
  // A non-tripotent input yields a non-tripotent image, which the oracle
  // rejects on the way out.
  CHECK_THROWS_AS(good(0.5 * unit(r22, 0, 0)), structure_error);

  // A table that scales its output breaks the tripotent contract.
  auto bad_table = make_table_oracle(
      r22, r22, {{unit(r22, 0, 0), 0.5 * unit(r22, 0, 0)}});
  CHECK_THROWS_AS(bad_table(unit(r22, 0, 0)), structure_error);

  // Uncovered inputs are reported as such.
  auto sparse = make_table_oracle(r22, r22, {{unit(r22, 0, 0), unit(r22, 0, 0)}});
  CHECK_THROWS_AS(sparse(unit(r22, 1, 1)), structure_error);
}

TEST_CASE("phase extraction distinguishes the two branches") {
  auto s4 = FactorDescriptor::spin(4);
  TripotentOracle linear = make_oracle(spin_rotation_map(4, std::exp(I * 0.3), 21));
  TripotentOracle anti =
      make_oracle(spin_rotation_map(4, std::exp(I * 0.3), 22, Branch::antilinear));
  Rng rng(5);
  Element u = random_tripotent(s4, 2, rng);

  cplx lam = std::exp(I * (3.14159265358979 / 3.0));
  CHECK(std::abs(extract_phase(linear, u, lam) - lam) < 1e-10);
  CHECK(std::abs(extract_phase(anti, u, lam) - std::conj(lam)) < 1e-10);
  CHECK(detect_branch(linear, u) == Branch::linear);
  CHECK(detect_branch(anti, u) == Branch::antilinear);

  PhaseMapReport rep = phase_map_report(linear, u, random_tripotent(s4, 1, rng), 50, 7);
  CHECK(rep.multiplicativity < 1e-10);
  CHECK(rep.conjugation < 1e-10);
  CHECK(rep.minus_one < 1e-10);
  CHECK(rep.cross_agreement < 1e-10);
  CHECK(rep.branch == Branch::linear);
}

TEST_CASE("a table with a discontinuous phase map is rejected") {
  auto r22 = FactorDescriptor::rect(2, 2);
  Element e11 = unit(r22, 0, 0);
  cplx third = std::exp(I * (3.14159265358979 / 3.0));
  // f(i) = e^{i pi/3}, near neither i nor -i.
  auto table = make_table_oracle(r22, r22, {{e11, e11}, {I * e11, third * e11}});
  CHECK_THROWS_AS(detect_branch(table, e11), structure_error);
}

TEST_CASE("spin reconstruction recovers the composite map in both branches") {
  for (Branch branch : {Branch::linear, Branch::antilinear}) {
    RealLinearMap truth = spin_rotation_map(4, std::exp(I * (3.14159265358979 / 5.0)), 11, branch);
    TripotentOracle oracle = make_oracle(truth);
    ReconstructionReport rep = reconstruct_spin(oracle, {}, 300, 2);
    CHECK(rep.branch == branch);
    CHECK(rep.max_residual <= 1e-8);
    CHECK(rep.n_samples >= 300);
    // Even when lambda0 and the rotation are individually fixed only up to a
    // sign, the composite map is pinned down.
    CHECK(map_distance(rep.map, truth, 3) < 1e-9);
  }
}

TEST_CASE("spin reconstruction needs matching spin dimensions") {
  RealLinearMap truth = spin_rotation_map(5, cplx{1, 0}, 4);
  TripotentOracle oracle = make_oracle(truth);
  CHECK_NOTHROW(reconstruct_spin(oracle, {}, 50, 1));

  auto r22 = FactorDescriptor::rect(2, 2);
  TripotentOracle wrong = make_oracle(identity_map(r22));
  CHECK_THROWS_AS(reconstruct_spin(wrong, {}, 50, 1), precondition_error);
}

TEST_CASE("rectangular reconstruction covers all four product forms") {
  struct Case {
    int m, n;
    RectForm form;
  };
  const Case cases[] = {
      {2, 3, RectForm::plain},    {2, 3, RectForm::conj},      {3, 3, RectForm::plain},
      {3, 3, RectForm::conj},     {3, 3, RectForm::adjoint},   {3, 3, RectForm::transpose},
      {2, 3, RectForm::adjoint},  {2, 3, RectForm::transpose},
  };
  for (const auto& c : cases) {
    RealLinearMap truth = rect_product_map(c.m, c.n, 7 + static_cast<int>(c.form), c.form);
    TripotentOracle oracle = make_oracle(truth);
    ReconstructionReport rep = reconstruct_rectangular(oracle, {}, 300, 9);
    CHECK(rep.branch == rect_form_branch(c.form));
    CHECK(rep.max_residual <= 1e-8);
    CHECK(map_distance(rep.map, truth, 10) < 1e-9);
    if (c.m == c.n) CHECK(rep.blocks.at(0).product_form == static_cast<int>(c.form));
  }
}

TEST_CASE("square automorphism classification identifies each product form") {
  for (int form = 1; form <= 4; ++form) {
    RealLinearMap truth = rect_product_map(3, 3, 40 + form, static_cast<RectForm>(form));
    SquareAutomorphismReport rep = classify_square_automorphism(truth);
    CHECK(rep.form == form);
    CHECK(rep.residual < 1e-9);

    // Rebuilding the map from (form, U, V) reproduces it.
    auto r33 = FactorDescriptor::rect(3, 3);
    RealLinearMap rebuilt = RealLinearMap::from_function(
        r33, r33, rect_form_branch(static_cast<RectForm>(form)), [&](const Element& x) {
          Matrix g;
          switch (rep.form) {
            case 1: g = x.matrix(); break;
            case 2: g = x.matrix().conjugate(); break;
            case 3: g = x.matrix().adjoint(); break;
            default: g = x.matrix().transpose(); break;
          }
          return Element(r33, (rep.U * g * rep.V).eval());
        });
    CHECK(map_distance(truth, rebuilt, 11) < 1e-9);
  }
}

TEST_CASE("a grid-breaking table is rejected with the violated axiom named") {
  auto r23 = FactorDescriptor::rect(2, 3);
  RectGrid g = rectangular_grid(2, 3);
  std::vector<std::pair<Element, Element>> entries;
  for (const auto& c : g.cells) entries.emplace_back(c, c);
  entries[0].second = -1.0 * entries[0].second;  // sign flip breaks the closing identity
  TripotentOracle oracle = make_table_oracle(r23, r23, entries);
  try {
    reconstruct_rectangular(oracle, {}, 50, 1);
    FAIL("expected a structure error");
  } catch (const structure_error& e) {
    CHECK(std::string(e.what()).find("grid axiom (ii) violated") != std::string::npos);
  }
}

TEST_CASE("atomic reconstruction recovers routing, branches, and blocks") {
  FactorDescriptor domain = FactorDescriptor::sum(
      {FactorDescriptor::spin(3), FactorDescriptor::rect(2, 2), FactorDescriptor::spin(4)});
  const std::vector<int> sigma = {1, 2, 0};
  std::vector<RealLinearMap> comps = {
      spin_rotation_map(3, std::exp(I * 0.2), 51, Branch::antilinear),
      rect_product_map(2, 2, 52, RectForm::conj),
      spin_rotation_map(4, std::exp(I * 0.9), 53, Branch::linear),
  };
  RealLinearMap truth = sum_routing_map(domain, sigma, comps);
  TripotentOracle oracle = make_oracle(truth);
  ReconstructionReport rep = reconstruct_atomic(oracle, {}, 120, 6);
  CHECK(rep.sigma == sigma);
  REQUIRE(rep.blocks.size() == 3);
  CHECK(rep.blocks[0].branch == Branch::antilinear);
  CHECK(rep.blocks[1].branch == Branch::antilinear);
  CHECK(rep.blocks[2].branch == Branch::linear);
  CHECK(rep.max_residual <= 1e-8);
  CHECK(map_distance(rep.map, truth, 13) < 1e-8);
}

TEST_CASE("atomic reconstruction rejects rank-one components") {
  FactorDescriptor domain =
      FactorDescriptor::sum({FactorDescriptor::rect(1, 2), FactorDescriptor::spin(3)});
  TripotentOracle oracle = make_oracle(identity_map(domain));
  CHECK_THROWS_AS(reconstruct_atomic(oracle, {}, 10, 1), precondition_error);
}

TEST_CASE("preservation checker passes clean restrictions and flags each violation class") {
  auto r33 = FactorDescriptor::rect(3, 3);
  Element z = Element::zero(r33);
  Element e11 = unit(r33, 0, 0), e22 = unit(r33, 1, 1), e12 = unit(r33, 0, 1);
  Element e1122 = e11 + e22;
  Element all3 = e1122 + unit(r33, 2, 2);

  // Clean: the restriction of a product-form map.
  std::vector<Element> family = {z, e11, e22, e12, e1122, all3};
  TripotentOracle clean = make_oracle(rect_product_map(3, 3, 61, RectForm::adjoint));
  PreservationReport ok_rep = check_preservation(family, clean);
  CHECK(ok_rep.ok);
  CHECK(ok_rep.violations.empty());
  CHECK(ok_rep.pairs_checked > 0);
  CHECK(ok_rep.sums_checked > 0);

  auto has_kind = [](const PreservationReport& rep, const std::string& kind) {
    for (const auto& v : rep.violations)
      if (v.kind == kind) return true;
    return false;
  };

  // Order violation: swap a tripotent with one above it.
  auto swap_table = make_table_oracle(
      r33, r33, {{z, z}, {e11, e1122}, {e1122, e11}});
  PreservationReport order_rep = check_preservation({z, e11, e1122}, swap_table);
  CHECK_FALSE(order_rep.ok);
  CHECK(has_kind(order_rep, "order"));

  // Orthogonality violation: collinearize an orthogonal pair.
  auto collinear_table = make_table_oracle(
      r33, r33, {{z, z}, {e11, e11}, {e22, e12}});
  PreservationReport orth_rep = check_preservation({z, e11, e22}, collinear_table);
  CHECK_FALSE(orth_rep.ok);
  CHECK(has_kind(orth_rep, "orthogonality"));

  // Additivity violation: the sum image overshoots.
  auto sum_table = make_table_oracle(
      r33, r33, {{z, z}, {e11, e11}, {e22, e22}, {e1122, all3}});
  PreservationReport add_rep = check_preservation({z, e11, e22, e1122}, sum_table);
  CHECK_FALSE(add_rep.ok);
  CHECK(has_kind(add_rep, "additivity"));
}

TEST_CASE("verify extension confirms a reconstructed spin map end to end") {
  RealLinearMap truth = spin_rotation_map(3, std::exp(I * 0.25), 71);
  TripotentOracle oracle = make_oracle(truth);
  ReconstructionReport rep = reconstruct_spin(oracle, {}, 100, 1);
  ExtensionReport ext = verify_extension(rep.map, oracle, 200, 2);
  CHECK(ext.ok);
  CHECK(ext.max_tripotent_residual < 1e-9);
  CHECK(ext.max_triple_residual < 1e-9);
  CHECK(ext.max_isometry_residual < 1e-9);
}
