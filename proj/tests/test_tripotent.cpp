// Tripotents: Peirce decomposition, classification, order, orthogonality,
// quadrangles, trangles, and samplers.

#include <catch2/catch_amalgamated.hpp>

#include "triplekit/tripotent.hpp"

using namespace triplekit;

namespace {

Element unit(const FactorDescriptor& f, int i, int j) {
  Matrix m = Matrix::Zero(f.rows(), f.cols());
  m(i, j) = 1.0;
  return Element(f, m);
}

Element spin_coords(const FactorDescriptor& f, std::initializer_list<cplx> cs) {
  Vector v(static_cast<Eigen::Index>(cs.size()));
  Eigen::Index k = 0;
  for (cplx c : cs) v(k++) = c;
  return Element(f, v);
}

const cplx I{0.0, 1.0};

}  // namespace

TEST_CASE("tripotency is a fixed-point property, not scale-invariant") {
  auto r22 = FactorDescriptor::rect(2, 2);
  Element e11 = unit(r22, 0, 0);
  CHECK(is_tripotent(e11));
  CHECK(tripotent_residual(e11) < 1e-15);
  CHECK_FALSE(is_tripotent(0.5 * e11));
  CHECK(is_tripotent(Element::zero(r22)));
  // A unimodular multiple stays a tripotent.
  CHECK(is_tripotent(std::exp(I * 0.7) * e11));
}

TEST_CASE("Peirce decomposition of a minimal unit in rect(2,2)") {
  auto r22 = FactorDescriptor::rect(2, 2);
  Element e11 = unit(r22, 0, 0);
  PeirceData pd = peirce(e11);
  CHECK(pd.dims[0] == 1);
  CHECK(pd.dims[1] == 2);
  CHECK(pd.dims[2] == 1);
  CHECK(pd.agreement() < 1e-10);

  // The projectors partition the identity.
  auto D = static_cast<Eigen::Index>(r22.complex_dim());
  CHECK((pd.P2 + pd.P1 + pd.P0 - Matrix::Identity(D, D)).norm() < 1e-12);

  // Known memberships: E12, E21 are half-eigenvectors; E22 is annihilated.
  CHECK(peirce_residual(e11, unit(r22, 0, 1), 1) < 1e-12);
  CHECK(peirce_residual(e11, unit(r22, 1, 0), 1) < 1e-12);
  CHECK(peirce_residual(e11, unit(r22, 1, 1), 0) < 1e-12);
  CHECK(peirce_residual(e11, e11, 2) < 1e-12);

  // Projection routing agrees with the closed forms.
  Element x = random_element(r22, 5);
  CHECK(norm(pd.project(2, x) + pd.project(1, x) + pd.project(0, x) - x) < 1e-10);
  CHECK(norm(pd.project(2, x) - pd.project(2, x, true)) < 1e-9);
}

TEST_CASE("peirce rejects non-tripotents") {
  auto r22 = FactorDescriptor::rect(2, 2);
  CHECK_THROWS_AS(peirce(0.5 * unit(r22, 0, 0)), precondition_error);
}

TEST_CASE("classification across the category lattice") {
  auto r22 = FactorDescriptor::rect(2, 2);
  auto r23 = FactorDescriptor::rect(2, 3);
  auto s4 = FactorDescriptor::spin(4);

  Classification zero = classify(Element::zero(r22));
  CHECK(zero.category == TripotentClass::zero);
  CHECK(zero.rank == 0);

  Classification min1 = classify(unit(r22, 0, 0));
  CHECK(min1.category == TripotentClass::minimal);
  CHECK(min1.rank == 1);
  CHECK(min1.minimal);
  CHECK_FALSE(min1.unitary);

  Classification uni = classify(unit(r22, 0, 0) + unit(r22, 1, 1));
  CHECK(uni.category == TripotentClass::unitary);
  CHECK(uni.rank == 2);
  CHECK(uni.unitary);
  CHECK(uni.complete);

  // Full rank in a non-square factor: complete but not unitary.
  Classification comp = classify(unit(r23, 0, 0) + unit(r23, 1, 1));
  CHECK(comp.category == TripotentClass::complete);
  CHECK(comp.rank == 2);
  CHECK(comp.complete);
  CHECK_FALSE(comp.unitary);

  // Spin factor: the real axis vector is unitary, a half-pair is minimal.
  Classification spin_max = classify(spin_coords(s4, {1, 0, 0, 0}));
  CHECK(spin_max.category == TripotentClass::unitary);
  CHECK(spin_max.rank == 2);
  Classification spin_min = classify(spin_coords(s4, {0.5, 0.5 * I, 0, 0}));
  CHECK(spin_min.category == TripotentClass::minimal);
  CHECK(spin_min.rank == 1);
  CHECK(spin_min.dims[0] == 1);
  CHECK(spin_min.dims[1] == 2);
  CHECK(spin_min.dims[2] == 1);

  // Intermediate: rank 1 in herm(3) is neither minimal-with-full... it is
  // minimal; rank 2 is intermediate (not complete, not minimal).
  auto h3 = FactorDescriptor::herm(3);
  Matrix two = Matrix::Zero(3, 3);
  two(0, 0) = two(1, 1) = 1.0;
  Classification mid = classify(Element(h3, two));
  CHECK(mid.category == TripotentClass::intermediate);
  CHECK(mid.rank == 2);
}

TEST_CASE("skew tripotents report triple rank, not matrix rank") {
  auto k4 = FactorDescriptor::skew(4);
  Matrix j = Matrix::Zero(4, 4);
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  Element e(k4, j);
  REQUIRE(is_tripotent(e));
  Classification c = classify(e);
  CHECK(c.rank == 1);  // one symplectic block
  CHECK(c.minimal);

  Matrix j2 = j;
  j2(2, 3) = 1.0;
  j2(3, 2) = -1.0;
  Classification c2 = classify(Element(k4, j2));
  CHECK(c2.rank == 2);
  CHECK(c2.unitary);
}

TEST_CASE("order and orthogonality on matrix units") {
  auto r22 = FactorDescriptor::rect(2, 2);
  Element e11 = unit(r22, 0, 0), e12 = unit(r22, 0, 1), e22 = unit(r22, 1, 1);

  CHECK(is_orthogonal(e11, e22));
  CHECK_FALSE(is_orthogonal(e11, e12));
  CHECK(leq(e11, e11 + e22));
  CHECK_FALSE(leq(e11 + e22, e11));
  CHECK(leq(Element::zero(r22), e11));
  CHECK_FALSE(leq(e11, e12));

  // Orthogonality demands both arguments be tripotents.
  CHECK_THROWS_AS(is_orthogonal(0.5 * e11, e22), precondition_error);
}

TEST_CASE("spin states sit below the time axis in the tripotent order") {
  auto s4 = FactorDescriptor::spin(4);
  Element time_axis = spin_coords(s4, {1, 0, 0, 0});
  Element zplus = spin_coords(s4, {0.5, 0, 0, 0.5 * I});
  CHECK(is_tripotent(zplus));
  CHECK(leq(zplus, time_axis));
  CHECK_FALSE(leq(time_axis, zplus));
}

TEST_CASE("collinearity and governing") {
  auto r22 = FactorDescriptor::rect(2, 2);
  CHECK(is_collinear(unit(r22, 0, 0), unit(r22, 0, 1)));
  CHECK_FALSE(is_collinear(unit(r22, 0, 0), unit(r22, 1, 1)));

  auto h2 = FactorDescriptor::herm(2);
  Matrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  Element u(h2, sx);
  Matrix d1 = Matrix::Zero(2, 2);
  d1(0, 0) = 1.0;
  Element v(h2, d1);
  CHECK(governs(u, v));
  CHECK_FALSE(governs(v, u));
}

TEST_CASE("the unit quadrangle and its sign twist") {
  auto r22 = FactorDescriptor::rect(2, 2);
  Element e11 = unit(r22, 0, 0), e12 = unit(r22, 0, 1);
  Element e22 = unit(r22, 1, 1), e21 = unit(r22, 1, 0);
  CHECK(is_quadrangle(e11, e12, e22, e21));
  // Flipping the sign of the closing corner breaks the identity.
  CHECK_FALSE(is_quadrangle(e11, e12, e22, -1.0 * e21));
  // Non-minimal entries are not a quadrangle.
  CHECK_FALSE(is_quadrangle(e11 + e22, e12, e22, e21));
}

TEST_CASE("the symmetric trangle and the spin trangle") {
  auto h2 = FactorDescriptor::herm(2);
  Matrix sx(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1(0, 0) = 1.0;
  d2(1, 1) = 1.0;
  CHECK(is_trangle(Element(h2, d1), Element(h2, sx), Element(h2, d2)));

  auto s3 = FactorDescriptor::spin(3);
  Element v = spin_coords(s3, {0, 0.5, 0.5 * I});
  Element u = spin_coords(s3, {1, 0, 0});
  Element vt = spin_coords(s3, {0, -0.5, 0.5 * I});
  CHECK(is_trangle(v, u, vt));
  // The wrong partner fails.
  CHECK_FALSE(is_trangle(v, u, v));
}

TEST_CASE("scalar recovery for a minimal below a maximal spin tripotent") {
  auto s4 = FactorDescriptor::spin(4);
  cplx lambda = std::exp(I * (3.14159265358979 / 7.0));
  Element u = spin_coords(s4, {lambda, 0, 0, 0});

  // A minimal of the same phased frame sits exactly below u: the scalar is 1.
  Element v = 0.5 * lambda * spin_coords(s4, {1, I, 0, 0});
  auto gamma = scalar_multiple_below(u, v);
  REQUIRE(gamma.has_value());
  CHECK(std::abs(*gamma - cplx{1.0, 0.0}) < 1e-9);
  CHECK(leq(v, u));

  // A minimal of the unphased frame recovers the phase carried by u.
  Element w = 0.5 * spin_coords(s4, {1, I, 0, 0});
  auto mu = scalar_multiple_below(u, w);
  REQUIRE(mu.has_value());
  CHECK(std::abs(*mu - lambda) < 1e-9);

  // A tripotent that is not a scalar multiple of anything below u is refused.
  Element elsewhere = 0.5 * spin_coords(s4, {1, 0, I, 0});
  Element tilted = spin_coords(s4, {0, 1, 0, 0});
  auto none = scalar_multiple_below(tilted, elsewhere);
  CHECK_FALSE(none.has_value());
}

TEST_CASE("orthogonal sums add ranks and reject overlapping frames") {
  auto r23 = FactorDescriptor::rect(2, 3);
  Element e11 = unit(r23, 0, 0), e22 = unit(r23, 1, 1);
  Element s = orthogonal_sum({e11, e22});
  CHECK(norm(s - (e11 + e22)) < 1e-14);
  CHECK_THROWS_AS(orthogonal_sum({e11, unit(r23, 0, 1)}), precondition_error);
}

TEST_CASE("tripotent samplers hit the requested rank in every kind") {
  Rng rng(31337);
  struct KindCase {
    FactorDescriptor f;
    int max_rank;
  };
  const KindCase cases[] = {
      {FactorDescriptor::rect(2, 3), 2},
      {FactorDescriptor::skew(4), 2},
      {FactorDescriptor::skew(5), 2},
      {FactorDescriptor::herm(3), 3},
      {FactorDescriptor::spin(4), 2},
      {FactorDescriptor::sum({FactorDescriptor::spin(3), FactorDescriptor::rect(2, 2)}), 4},
  };
  for (const auto& kc : cases) {
    for (int r = 1; r <= kc.max_rank; ++r) {
      for (int s = 0; s < 5; ++s) {
        Element e = random_tripotent(kc.f, r, rng);
        REQUIRE(is_tripotent(e));
        CHECK(classify(e).rank == r);
      }
    }
  }
}

TEST_CASE("random tripotents of a sum spread across components") {
  auto sum = FactorDescriptor::sum({FactorDescriptor::spin(3), FactorDescriptor::rect(2, 2)});
  Rng rng(8);
  bool saw_first = false, saw_second = false;
  for (int s = 0; s < 40; ++s) {
    Element e = random_tripotent(sum, rng);
    REQUIRE(is_tripotent(e));
    if (norm(e.parts()[0]) > 0.5) saw_first = true;
    if (norm(e.parts()[1]) > 0.5) saw_second = true;
  }
  CHECK(saw_first);
  CHECK(saw_second);
}
