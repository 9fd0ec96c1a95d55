#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "orbitforge/embeddings.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/lie_algebra.hpp"

using namespace orbitforge;

namespace {

template <class T>
AlgebraElement<T> random_element(const AlgebraPtr<T>& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> c(alg->dimension());
  for (double& v : c) v = n(rng);
  return AlgebraElement<T>::from_coords(alg, std::move(c));
}

template <class T>
double gram_defect(const LieAlgebra<T>& alg) {
  double worst = 0.0;
  const auto& b = alg.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      worst = std::max(worst, std::abs(alg.inner(b[i], b[j]) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_CASE("dimensions and orthonormal bases") {
  for (int n = 2; n <= 11; ++n) {
    CHECK(so_algebra(n)->dimension() == static_cast<std::size_t>(n * (n - 1) / 2));
    CHECK(gram_defect(*so_algebra(n)) < 1e-12);
  }
  for (int l = 1; l <= 5; ++l) {
    CHECK(sp_algebra(l)->dimension() == static_cast<std::size_t>(l * (2 * l + 1)));
    CHECK(gram_defect(*sp_algebra(l)) < 1e-12);
    CHECK(u_algebra(l)->dimension() == static_cast<std::size_t>(l * l));
    CHECK(gram_defect(*u_algebra(l)) < 1e-12);
  }
  CHECK(su_algebra(3)->dimension() == 8u);
}

TEST_CASE("named basis elements") {
  auto so7 = so_algebra(7);
  Matrix<double> f12(7, 7);
  f12(0, 1) = 1.0;
  f12(1, 0) = -1.0;
  CHECK(basis_element(so7, BasisKind::F_skew, 1, 2).matrix() == f12);

  auto sp2 = sp_algebra(2);
  const auto jg = basis_element(sp2, BasisKind::jG, 1).matrix();
  CHECK(jg(0, 0) == Quaternion(0, 0, std::sqrt(2.0), 0));
  CHECK(jg(1, 1) == Quaternion());
  CHECK(sp2->inner(basis_element(sp2, BasisKind::iG, 1).matrix(), basis_element(sp2, BasisKind::iG, 1).matrix()) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(basis_element(so7, BasisKind::F_skew, 1, 1), ConstructionError);
  CHECK_THROWS_AS(basis_element(so7, BasisKind::F_skew, 1, 8), ConstructionError);
  CHECK_THROWS_AS(basis_element(sp2, BasisKind::F_skew, 1, 2), ConstructionError);
}

TEST_CASE("bracket identities in sp(1) and sp(2)") {
  auto sp1 = sp_algebra(1);
  const auto br = bracket(basis_element(sp1, BasisKind::iG, 1), basis_element(sp1, BasisKind::jG, 1));
  const auto want = (2.0 * std::sqrt(2.0)) * basis_element(sp1, BasisKind::kG, 1);
  CHECK(max_abs_diff(br.matrix(), want.matrix()) < 1e-14);

  auto sp2 = sp_algebra(2);
  const double a = 0.7, b = -1.1, g = 0.4, e = 2.0, d = 1.3;
  const auto z1 = a * basis_element(sp2, BasisKind::iG, 1) + b * basis_element(sp2, BasisKind::iG, 2) +
                  g * basis_element(sp2, BasisKind::jG, 2) + e * basis_element(sp2, BasisKind::kG, 2);
  const auto y = d * basis_element(sp2, BasisKind::jG, 1);
  const auto expect = (2.0 * std::sqrt(2.0) * a * d) * basis_element(sp2, BasisKind::kG, 1);
  CHECK(max_abs_diff(bracket(z1, y).matrix(), expect.matrix()) < 1e-13);
}

TEST_CASE("membership is enforced") {
  auto so3 = so_algebra(3);
  Matrix<double> sym(3, 3);
  sym(0, 1) = sym(1, 0) = 1.0;
  CHECK_THROWS(AlgebraElement<double>::from_matrix(so3, sym));
  CHECK_THROWS(AlgebraElement<double>::from_coords(so3, {1.0, 2.0}));
  CHECK(AlgebraElement<double>::zero(so3).matrix() == Matrix<double>(3, 3));
}

TEST_CASE("adjoint action preserves the inner product") {
  std::mt19937_64 rng(5);
  auto so7 = so_algebra(7);
  const auto x = random_element(so7, rng);
  CHECK(max_abs_diff(adjoint_action(Matrix<double>::identity(7), x).matrix(), x.matrix()) == 0.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto q = haar_orthogonal(7, s);
    const auto y = random_element(so7, rng);
    CHECK(invariant_inner(adjoint_action(q, x), adjoint_action(q, y)) == doctest::Approx(invariant_inner(x, y)));
    const auto qs = haar_symplectic(3, s);
    const auto a = random_element(sp_algebra(3), rng);
    CHECK(invariant_inner(adjoint_action(qs, a), adjoint_action(qs, a)) == doctest::Approx(invariant_inner(a, a)));
  }
  // the quarter turn in the (1, 3) plane sends F12 to +-F32
  Matrix<double> p(7, 7);
  p(0, 2) = -1.0;
  p(2, 0) = p(1, 1) = 1.0;
  for (std::size_t i = 3; i < 7; ++i) p(i, i) = 1.0;
  const auto f = adjoint_action(p, basis_element(so7, BasisKind::F_skew, 1, 2)).matrix();
  CHECK(std::abs(f(2, 1)) == 1.0);
  CHECK(max_abs(f) == 1.0);
}

TEST_CASE("u(l) -> so(2l+1) block rule and homomorphism") {
  Matrix<Complex> m(1, 1);
  m(0, 0) = Complex(0.0, 0.25);
  const auto img = embed_tau_prime(AlgebraElement<Complex>::from_matrix(u_algebra(1), m)).matrix();
  Matrix<double> want(3, 3);
  want(0, 1) = 0.25;
  want(1, 0) = -0.25;
  CHECK(img == want);
  std::mt19937_64 rng(11);
  for (int l = 1; l <= 4; ++l)
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(u_algebra(l), rng), b = random_element(u_algebra(l), rng);
      CHECK(max_abs_diff(embed_tau_prime(bracket(a, b)).matrix(),
                         bracket(embed_tau_prime(a), embed_tau_prime(b)).matrix()) < 1e-12);
    }
  CHECK(from_pair(to_pair(random_element(u_algebra(3), rng))).matrix().rows() == 3u);
}

TEST_CASE("so(2m+1) + so(2k) -> so(2l+1) is a homomorphism") {
  std::mt19937_64 rng(12);
  for (int l = 2; l <= 5; ++l)
    for (int m = 1; m < l; ++m) {
      auto g1 = so_algebra(2 * m + 1);
      auto g2 = so_algebra(2 * (l - m));
      for (int t = 0; t < 10; ++t) {
        const auto a1 = random_element(g1, rng), b1 = random_element(g1, rng);
        const auto a2 = random_element(g2, rng), b2 = random_element(g2, rng);
        CHECK(max_abs_diff(embed_sigma(m, l, bracket(a1, b1), bracket(a2, b2)).matrix(),
                           bracket(embed_sigma(m, l, a1, a2), embed_sigma(m, l, b1, b2)).matrix()) < 1e-12);
      }
    }
  CHECK_THROWS(embed_sigma(3, 3, AlgebraElement<double>::zero(so_algebra(7)), AlgebraElement<double>::zero(so_algebra(2))));
}

TEST_CASE("complex image of sp(l)") {
  const int l = 3;
  auto sp = sp_algebra(l);
  const auto ig = embed_dpi(basis_element(sp, BasisKind::iG, 1));
  CHECK(ig(0, 0) == Complex(0.0, std::sqrt(2.0)));
  CHECK(ig(3, 3) == Complex(0.0, -std::sqrt(2.0)));
  const auto jg = embed_dpi(basis_element(sp, BasisKind::jG, 1));
  CHECK(std::abs(jg(0, 3) - Complex(-std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(jg(3, 0) - Complex(std::sqrt(2.0))) < 1e-15);
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto a = random_element(sp, rng), b = random_element(sp, rng);
    worst = std::max(worst, max_abs_diff(embed_dpi(bracket(a, b)), bracket(embed_dpi(a), embed_dpi(b))));
  }
  CHECK(worst < 1e-11);
}
