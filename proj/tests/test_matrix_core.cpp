#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "orbitforge/homogeneous_space.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/lie_algebra.hpp"
#include "orbitforge/orbit_invariants.hpp"

using namespace orbitforge;

namespace {

Matrix<double> rot_plane(std::size_t n, std::size_t i, std::size_t j, double rate) {
  Matrix<double> m(n, n);
  m(i, j) = -rate;
  m(j, i) = rate;
  return m;
}

}  // namespace

TEST_CASE("quaternion units multiply as ij = k, jk = i, ki = j") {
  const auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(i * j * k == -Quaternion::one());
  CHECK(conj(Quaternion(1, 2, 3, 4)) == Quaternion(1, -2, -3, -4));
}

TEST_CASE("A + jB splitting round-trips through the complex block form") {
  Matrix<Quaternion> q(2, 2);
  q(0, 0) = Quaternion(1, 2, 3, 4);
  q(0, 1) = Quaternion(-1, 0.5, 0, 2);
  q(1, 0) = Quaternion(0, 0, -3, 1);
  q(1, 1) = Quaternion(2, -1, 1, 0);
  CHECK(max_abs_diff(from_complex_block(to_complex_block(q)), q) == 0.0);
  // multiplicative
  const auto p = adjoint(q);
  CHECK(max_abs_diff(to_complex_block(q * p), to_complex_block(q) * to_complex_block(p)) < 1e-13);
}

TEST_CASE("bracket of diagonal matrices vanishes") {
  Matrix<double> a(3, 3), b(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    a(i, i) = 1.0 + static_cast<double>(i);
    b(i, i) = -2.0 * static_cast<double>(i);
  }
  CHECK(max_abs(bracket(a, b)) == 0.0);
}

TEST_CASE("shape mismatches throw") {
  CHECK_THROWS_AS(Matrix<double>(2, 2) * Matrix<double>(3, 3), ShapeError);
  CHECK_THROWS_AS(Matrix<double>(2, 2, {1.0}), ShapeError);
  CHECK_THROWS_AS(bracket(Matrix<double>(2, 3), Matrix<double>(2, 3)), ShapeError);
}

TEST_CASE("charpoly: trivial and single-plane cases") {
  const auto z7 = charpoly(Matrix<double>(7, 7));
  CHECK(z7 == PolyCoeffs<double>::monomial(7));
  const auto p = charpoly(rot_plane(7, 0, 1, 1.0));
  REQUIRE(p.degree() == 7);
  CHECK(p.at_power(7) == doctest::Approx(1.0));
  CHECK(p.at_power(5) == doctest::Approx(1.0));
  for (std::size_t k : {0u, 1u, 2u, 3u, 4u, 6u}) CHECK(std::abs(p.at_power(k)) < 1e-14);
}

TEST_CASE("charpoly: exact rational matches a hand-expanded 3x3") {
  // [[1,2,0],[0,3,1],[1,0,2]]: z^3 - 6 z^2 + 11 z - 8
  Matrix<Rational> m(3, 3, {1, 2, 0, 0, 3, 1, 1, 0, 2});
  const auto p = charpoly(m);
  CHECK(p.coeffs == std::vector<Rational>{1, -6, 11, -8});
  Matrix<double> f(3, 3, {1, 2, 0, 0, 3, 1, 1, 0, 2});
  const auto pf = charpoly(f);
  for (std::size_t k = 0; k < 4; ++k) CHECK(pf.coeffs[k] == doctest::Approx(to_double(p.coeffs[k])).epsilon(1e-12));
}

TEST_CASE("charpoly of the first so(7) preset at lambda = 3/2") {
  // Frozen from an independent symbolic expansion of the 7x7 matrix.
  const auto w = make_so7_vector(So7Preset::PairA, MetricParams(1.0, 1.5)).matrix();
  const auto p = charpoly(w);
  CHECK(p.at_power(5) == doctest::Approx(269.0 / 32.0).epsilon(1e-13));
  CHECK(p.at_power(3) == doctest::Approx(3231.0 / 512.0).epsilon(1e-13));
  CHECK(p.at_power(1) == doctest::Approx(2187.0 / 2048.0).epsilon(1e-13));
  const auto tail = so7_charpoly_tail(so7_squared_coefficients(So7Preset::PairA, Rational(3, 2)), Rational(3, 2));
  CHECK(tail[0] == Rational(269, 32));
  CHECK(tail[1] == Rational(3231, 512));
  CHECK(tail[2] == Rational(2187, 2048));
}

TEST_CASE("quaternionic spectra go through the complex image") {
  Matrix<Quaternion> q(1, 1);
  q(0, 0) = Quaternion::i();
  const auto p = charpoly(to_complex_block(q));
  CHECK(std::abs(p.at_power(0) - Complex(1.0)) < 1e-15);  // eigenvalues +-i
}

TEST_CASE("Cayley retraction") {
  CHECK(max_abs_diff(cayley_retract(Matrix<double>(4, 4)), Matrix<double>::identity(4)) == 0.0);
  for (double t : {0.1, 1.0, 3.0}) {
    const auto q = cayley_retract(rot_plane(2, 0, 1, t));
    const double a = 2.0 * std::atan(t / 2.0);
    CHECK(q(0, 0) == doctest::Approx(std::cos(a)));
    CHECK(q(1, 0) == doctest::Approx(std::sin(a)));
  }
  auto so6 = so_algebra(6);
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto u = haar_orthogonal(6, s);
    Matrix<double> skew = (u - transpose(u));
    skew *= 0.5 / std::max(1.0, frobenius_norm(skew));
    CHECK(unitarity_defect(cayley_retract(skew)) < 1e-12);
  }
  Matrix<Quaternion> h(2, 2);
  h(0, 0) = Quaternion(0, 0.3, 0.1, 0);
  h(0, 1) = Quaternion(0.2, 0.1, 0, 0.4);
  h(1, 0) = -conj(h(0, 1));
  h(1, 1) = Quaternion(0, 0, 0, -0.5);
  CHECK(unitarity_defect(cayley_retract(h)) < 1e-12);
}

TEST_CASE("Haar sampling") {
  CHECK(haar_orthogonal(1, 42)(0, 0) == 1.0);
  CHECK(haar_orthogonal(7, 3) == haar_orthogonal(7, 3));
  CHECK(haar_symplectic(3, 3) == haar_symplectic(3, 3));
  CHECK_FALSE(haar_orthogonal(7, 3) == haar_orthogonal(7, 4));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto q = haar_orthogonal(7, s);
    CHECK(unitarity_defect(q) < 1e-12);
    CHECK(determinant(q) == doctest::Approx(1.0));
    CHECK(unitarity_defect(haar_symplectic(3, s)) < 1e-12);
  }
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("similarity invariance of charpoly over 100 Haar conjugations") {
  const auto w = make_so7_vector(So7Preset::PairA, MetricParams(1.0, 1.5)).matrix();
  const auto base = charpoly(w);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto q = haar_orthogonal(7, s);
    const auto p = charpoly(q * w * transpose(q));
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) worst = std::max(worst, std::abs(p.coeffs[k] - base.coeffs[k]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("Weyl-chamber representative of so(7) elements") {
  const auto z0 = skew_spectrum_so7(Matrix<double>(7, 7));
  CHECK(std::max({z0[0], z0[1], z0[2]}) < 1e-15);
  const auto z1 = skew_spectrum_so7(rot_plane(7, 0, 1, 1.0));
  CHECK(z1[0] == doctest::Approx(1.0));
  CHECK(std::abs(z1[1]) < 1e-14);
  const auto m = rot_plane(7, 0, 1, 2.0) + rot_plane(7, 2, 3, 1.0) + rot_plane(7, 4, 5, 3.0);
  const auto z = skew_spectrum_so7(m);
  CHECK(z[0] == doctest::Approx(3.0));
  CHECK(z[1] == doctest::Approx(2.0));
  CHECK(z[2] == doctest::Approx(1.0));
  const auto cf = skew_canonical_form(m);
  CHECK(unitarity_defect(cf.conjugator) < 1e-12);
  CHECK(determinant(cf.conjugator) == doctest::Approx(1.0));
}

TEST_CASE("rational fractions serialize with a denominator") {
  CHECK(to_fraction_string(Rational(189, 32)) == "189/32");
  CHECK(to_fraction_string(Rational(5)) == "5/1");
  CHECK(to_fraction_string(Rational(-3, 6)) == "-1/2");
  CHECK(parse_fraction("189/32") == Rational(189, 32));
  CHECK(parse_fraction("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_fraction("1/0"), ParseError);
  CHECK_THROWS_AS(parse_fraction("x/2"), ParseError);
  CHECK(looks_like_fraction("3/4"));
  CHECK_FALSE(looks_like_fraction("0.75"));
}
