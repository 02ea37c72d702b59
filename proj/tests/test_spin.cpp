// The four-dimensional spin factor: 2x2 matrix model, Minkowski embedding,
// spin states, Lorentz boosts, and spin tripotent classification.

#include <catch2/catch_amalgamated.hpp>

#include "triplekit/spin.hpp"

using namespace triplekit;

namespace {

const cplx I{0.0, 1.0};
const FactorDescriptor s4 = FactorDescriptor::spin(4);

Element coords(cplx a, cplx b, cplx c, cplx d) {
  Vector v(4);
  v << a, b, c, d;
  return Element(s4, v);
}

Matrix m22(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("basis vectors map to the unit and the twisted Pauli matrices") {
  CHECK((matrix_rep(coords(1, 0, 0, 0)) - m22(1, 0, 0, 1)).norm() < 1e-15);
  CHECK((matrix_rep(coords(0, 1, 0, 0)) - m22(0, -I, -I, 0)).norm() < 1e-15);
  CHECK((matrix_rep(coords(0, 0, 1, 0)) - m22(0, -1, 1, 0)).norm() < 1e-15);
  CHECK((matrix_rep(coords(0, 0, 0, 1)) - m22(-I, 0, 0, I)).norm() < 1e-15);
}

TEST_CASE("matrix model is a linear bijection") {
  Rng rng(11);
  for (int s = 0; s < 20; ++s) {
    Element x = random_element(s4, rng);
    Element back = inverse_rep(matrix_rep(x));
    CHECK(norm(back - x) < 1e-12);
  }
  // And the 2x2 determinant is carried to the coordinate square sum.
  Element x = coords(3, 4, 0, 0);
  Matrix m = matrix_rep(x);
  cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  CHECK(std::abs(det - cplx{25, 0}) < 1e-12);
  CHECK(std::abs(spin_determinant(x) - cplx{25, 0}) < 1e-12);
}

TEST_CASE("Minkowski embedding carries the spacetime inner product") {
  Eigen::Vector4d a(2, 1, 0, 0);
  Matrix m = minkowski_embed(a);
  cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  CHECK(std::abs(det - cplx{3, 0}) < 1e-12);  // 2^2 - 1^2
  CHECK(minkowski_norm(a) == Catch::Approx(3.0));

  // Light-like vectors have zero norm.
  CHECK(minkowski_norm(Eigen::Vector4d(1, 1, 0, 0)) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("spin states are the textbook axis projections") {
  CHECK((matrix_rep(spin_state({0, 0, 1})) - m22(1, 0, 0, 0)).norm() < 1e-15);
  CHECK((matrix_rep(spin_state({0, 0, -1})) - m22(0, 0, 0, 1)).norm() < 1e-15);
  CHECK((matrix_rep(spin_state({1, 0, 0})) - 0.5 * m22(1, 1, 1, 1)).norm() < 1e-15);
  CHECK((matrix_rep(spin_state({0, 1, 0})) - 0.5 * m22(1, -I, I, 1)).norm() < 1e-15);
}

TEST_CASE("spin states are minimal tripotents below the time axis") {
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int s = 0; s < 10; ++s) {
    Eigen::Vector3d b(g(rng), g(rng), g(rng));
    b.normalize();
    Element state = spin_state(b);
    REQUIRE(is_tripotent(state));
    SpinClassification c = classify_spin_tripotent(state);
    CHECK(c.kind == SpinTripotentKind::minimal);
    CHECK(leq(state, coords(1, 0, 0, 0)));
  }
  // Vectors outside the Bloch ball are rejected.
  CHECK_THROWS_AS(spin_state(Eigen::Vector3d(2, 0, 0)), precondition_error);
}

TEST_CASE("boosts act by symmetric congruence and preserve the determinant") {
  // Boost along z tilts the time axis into diag(e^chi, e^-chi).
  double chi = 0.5;
  Element boosted = lorentz_boost(coords(1, 0, 0, 0), chi, 3);
  CHECK((matrix_rep(boosted) - m22(std::exp(chi), 0, 0, std::exp(-chi))).norm() < 1e-12);

  // The z+ state becomes diag(e^chi, 0).
  Element bz = lorentz_boost(spin_state({0, 0, 1}), chi, 3);
  CHECK((matrix_rep(bz) - m22(std::exp(chi), 0, 0, 0)).norm() < 1e-12);

  // Zero rapidity is the identity.
  Element x = random_element(s4, 77);
  CHECK(norm(lorentz_boost(x, 0.0, 1) - x) < 1e-13);

  // Determinant preservation over random boosts.
  Rng rng(13);
  std::uniform_real_distribution<double> chi_dist(-3, 3);
  std::uniform_int_distribution<int> axis_dist(1, 3);
  for (int s = 0; s < 50; ++s) {
    Element y = random_element(s4, rng);
    double c = chi_dist(rng);
    int axis = axis_dist(rng);
    CHECK(std::abs(spin_determinant(lorentz_boost(y, c, axis)) - spin_determinant(y)) < 1e-10);
  }
  CHECK_THROWS_AS(lorentz_boost(x, 0.5, 4), precondition_error);
}

TEST_CASE("boosted states stop being tripotents; the polar part repairs them") {
  Element state = spin_state({0, 0, 1});
  Element boosted = lorentz_boost(state, 0.5, 3);
  CHECK_FALSE(is_tripotent(boosted));
  Element polar = polar_tripotent_part(boosted);
  CHECK(is_tripotent(polar));
  CHECK(norm(polar - state) < 1e-12);

  Element btime = lorentz_boost(coords(1, 0, 0, 0), 0.5, 3);
  CHECK_FALSE(is_tripotent(btime));
  CHECK(norm(polar_tripotent_part(btime) - coords(1, 0, 0, 0)) < 1e-12);
}

TEST_CASE("spin tripotent classification recovers frames and phases") {
  // Maximal with a phase in the right half plane.
  cplx lambda = std::exp(I * 0.4);
  Element u = lambda * coords(0, 1, 0, 0);
  SpinClassification cm = classify_spin_tripotent(u);
  CHECK(cm.kind == SpinTripotentKind::maximal);
  CHECK(std::abs(cm.lambda - lambda) < 1e-12);

  // The canonical phase flips representatives from the left half plane.
  Element u2 = (-lambda) * coords(0, 1, 0, 0);
  SpinClassification cm2 = classify_spin_tripotent(u2);
  CHECK(std::abs(cm2.lambda - lambda) < 1e-12);

  // Minimal: the real and imaginary parts form the orthonormal pair.
  Element v = 0.5 * (coords(1, 0, 0, 0) + I * coords(0, 0, 1, 0));
  SpinClassification cv = classify_spin_tripotent(v);
  CHECK(cv.kind == SpinTripotentKind::minimal);
  CHECK((cv.a - Eigen::Vector4d(1, 0, 0, 0).eval()).norm() < 1e-12);
  CHECK((cv.b - Eigen::Vector4d(0, 0, 1, 0).eval()).norm() < 1e-12);

  // Zero and non-tripotents.
  CHECK(classify_spin_tripotent(Element::zero(s4)).kind == SpinTripotentKind::zero);
  CHECK_THROWS_AS(classify_spin_tripotent(coords(0.3, 0, 0, 0)), precondition_error);
}

TEST_CASE("minimal tripotents below a maximal one come from orthogonal directions") {
  cplx lambda = std::exp(I * 1.1);
  Element u = lambda * coords(1, 0, 0, 0);
  Eigen::VectorXd b(4);
  b << 0, 0, 1, 0;
  Element v = minimal_below(u, b);
  CHECK(is_tripotent(v));
  CHECK(classify_spin_tripotent(v).kind == SpinTripotentKind::minimal);
  CHECK(leq(v, u));

  // Directions not orthogonal to the axis are rejected.
  Eigen::VectorXd bad(4);
  bad << 1, 0, 0, 0;
  CHECK_THROWS_AS(minimal_below(u, bad), precondition_error);
}

TEST_CASE("spin norm agrees with the operator norm of the matrix model") {
  Rng rng(99);
  for (int s = 0; s < 100; ++s) {
    Element x = random_element(s4, rng);
    CHECK(std::abs(norm(x) - operator_norm(matrix_rep(x))) <= 1e-10 * std::max(1.0, norm(x)));
  }
}

TEST_CASE("matrix model is restricted to four dimensions") {
  auto s5 = FactorDescriptor::spin(5);
  Vector v = Vector::Zero(5);
  v(0) = 1.0;
  CHECK_THROWS_AS(matrix_rep(Element(s5, v)), shape_error);
  // But the determinant form exists in any spin dimension.
  CHECK(std::abs(spin_determinant(Element(s5, v)) - cplx{1, 0}) < 1e-15);
}
