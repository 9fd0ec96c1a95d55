#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "orbitforge/delta_search.hpp"
#include "orbitforge/linalg.hpp"

using namespace orbitforge;

namespace {

Matrix<double> givens(std::size_t n, std::size_t i, std::size_t j, double angle) {
  Matrix<double> g = Matrix<double>::identity(n);
  g(i, i) = g(j, j) = std::cos(angle);
  g(i, j) = -std::sin(angle);
  g(j, i) = std::sin(angle);
  return g;
}

// Derivative-free reference: coordinate ascent over plane rotations with a shrinking angle grid.
double givens_sweep_max(const ReductiveDecomposition<double>& dec, const MetricParams& p, const Matrix<double>& w,
                        Matrix<double> q) {
  const std::size_t n = w.rows();
  double best = orbit_objective(dec, p, w, q);
  for (double h = 0.5; h > 1e-7; h *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          for (double a : {h, -h}) {
            const auto cand = givens(n, i, j, a) * q;
            const double v = orbit_objective(dec, p, w, cand);
            if (v > best + 1e-15) {
              best = v;
              q = cand;
              improved = true;
            }
          }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("gradient matches finite differences of the objective") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_so_decomposition(3);
  const auto w = make_so7_vector(So7Preset::PairA, p).matrix();
  const auto q = haar_orthogonal(7, 17);
  const auto g = orbit_gradient(dec, p, w, q);
  auto so7 = so_algebra(7);
  const double h = 1e-6;
  for (std::size_t b = 0; b < so7->dimension(); b += 3) {
    const auto& e = so7->basis()[b];
    const double fd = (orbit_objective(dec, p, w, cayley_retract(h * e) * q) -
                       orbit_objective(dec, p, w, cayley_retract(-h * e) * q)) / (2.0 * h);
    CHECK(fd == doctest::Approx(so7->inner(g, e)).epsilon(1e-5));
  }
}

TEST_CASE("gradient matches finite differences on Sp(l)") {
  const MetricParams p(1.0, 1.3);
  const auto dec = build_sp_decomposition(3);
  const auto w = make_sp_candidate(3, 0.7, 1.2, p).matrix();
  const auto q = haar_symplectic(3, 4);
  const auto g = orbit_gradient(dec, p, w, q);
  auto sp3 = sp_algebra(3);
  const double h = 1e-6;
  for (std::size_t b = 0; b < sp3->dimension(); b += 2) {
    const auto& e = sp3->basis()[b];
    const double fd = (orbit_objective(dec, p, w, cayley_retract(h * e) * q) -
                       orbit_objective(dec, p, w, cayley_retract(-h * e) * q)) / (2.0 * h);
    CHECK(fd == doctest::Approx(sp3->inner(g, e)).epsilon(1e-5));
  }
}

TEST_CASE("objective is constant along the isotropy group") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_so_decomposition(3);
  const auto w = make_so7_vector(So7Preset::PairA, p).matrix();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> hc(dec.h_basis().size());
    for (double& v : hc) v = n(rng);
    const auto h = isotropy_element(dec, hc);
    const auto q = haar_orthogonal(7, static_cast<std::uint64_t>(t));
    CHECK(orbit_objective(dec, p, w, h * q) == doctest::Approx(orbit_objective(dec, p, w, q)).epsilon(1e-12));
  }
}

TEST_CASE("parallel and serial searches agree exactly") {
  const MetricParams p(1.0, 1.5);
  DeltaSearchConfig cfg;
  cfg.restarts = 12;
  cfg.seed = 99;
  const auto so = build_so_decomposition(3);
  const auto w = make_so7_vector(So7Preset::PairA, p);
  const auto a = delta_search(so, p, w, cfg);
  const auto b = delta_search_serial(so, p, w, cfg);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.iterations == b.iterations);
  CHECK(a.best_group_element == b.best_group_element);
  CHECK(a.verdict == b.verdict);

  const auto sp = build_sp_decomposition(2);
  const auto c = make_sp_candidate(2, 1.0, 1.0, p);
  const auto x = delta_search(sp, p, c, cfg);
  const auto y = delta_search_serial(sp, p, c, cfg);
  CHECK(x.best_value == y.best_value);
  CHECK(x.best_group_element == y.best_group_element);
}

TEST_CASE("search on the so(7) preset reaches the orbit maximum found by a Givens sweep") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_so_decomposition(3);
  const auto w = make_so7_vector(So7Preset::PairA, p);
  DeltaSearchConfig cfg;
  cfg.restarts = 16;
  const auto r = delta_search(dec, p, w, cfg);
  CHECK(r.start_value == doctest::Approx(285.0 / 32.0).epsilon(1e-14));
  CHECK(r.best_value >= 305.0 / 32.0 - 1e-6);
  CHECK(r.verdict == Verdict::Refuted);
  CHECK(to_string(r.verdict) == "refuted");
  double sweep = 0.0;
  for (std::uint64_t s = 0; s < 4; ++s)
    sweep = std::max(sweep, givens_sweep_max(dec, p, w.matrix(), haar_orthogonal(7, s)));
  CHECK(sweep == doctest::Approx(r.best_value).epsilon(1e-6));
}

TEST_CASE("search does not improve the sp candidate") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_sp_decomposition(2);
  const auto r = delta_search(dec, p, make_sp_candidate(2, 1.0, 1.0, p));
  CHECK(r.restarts_used == 64);
  CHECK(r.best_value <= r.start_value + 1e-7);
  CHECK(r.verdict == Verdict::NotRefuted);
  CHECK(to_string(r.verdict) == "not-refuted");
}

TEST_CASE("vector with zero p-part") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_so_decomposition(3);
  DeltaSearchConfig cfg;
  cfg.restarts = 4;
  const auto r = delta_search(dec, p, dec.h_basis()[0], cfg);
  CHECK(r.start_value == 0.0);
  CHECK(r.best_value > 0.0);
  CHECK(r.verdict == Verdict::Refuted);
  const auto z = delta_search(dec, p, AlgebraElement<double>::zero(so_algebra(7)), cfg);
  CHECK(z.best_value == 0.0);
  CHECK(z.verdict == Verdict::NotRefuted);
}

TEST_CASE("certificates and verdicts") {
  DeltaSearchReport<double> r;
  r.start_value = 1.0;
  r.best_value = 1.0 + 5e-8;
  CHECK(decide_verdict(r) == Verdict::NotRefuted);
  r.best_value = 1.0 + 2e-7;
  CHECK(decide_verdict(r) == Verdict::Refuted);
  r.best_value = 1.0;
  attach_certificate(r, certify_so7_orbit_gap(Rational(3, 2)));
  CHECK(r.verdict == Verdict::Refuted);
}

TEST_CASE("invalid inputs") {
  const MetricParams p(1.0, 1.5);
  const auto dec = build_so_decomposition(3);
  CHECK_THROWS_AS(delta_search(dec, p, AlgebraElement<double>::zero(so_algebra(5))), AlgebraMismatch);
  DeltaSearchConfig bad;
  bad.restarts = -1;
  CHECK_THROWS_AS(delta_search(dec, p, make_so7_vector(So7Preset::PairA, p), bad), PreconditionError);
  // zero restarts: the identity alone
  DeltaSearchConfig none;
  none.restarts = 0;
  const auto r = delta_search(dec, p, make_so7_vector(So7Preset::PairA, p), none);
  CHECK(r.best_restart == -1);
  CHECK(r.best_value == r.start_value);
  // same seed, same restart start
  CHECK(restart_start(dec, 5, 3) == restart_start(dec, 5, 3));
}
