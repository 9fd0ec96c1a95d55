// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "orbitforge/delta_search.hpp"
#include "orbitforge/embeddings.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/orbit_invariants.hpp"
#include "orbitforge/scenarios.hpp"

using namespace orbitforge;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

template <class T>
AlgebraElement<T> random_element(const AlgebraPtr<T>& alg, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> c(alg->dimension());
  for (double& v : c) v = n(rng);
  return AlgebraElement<T>::from_coords(alg, std::move(c));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. exact certificates on the 20-point grid, spot values at 3/2
Outcome exact_certificates() {
  Outcome o;
  for (const Rational& l : default_lambda_grid()) {
    const auto c = certify_so7_orbit_gap(l);
    for (const auto& e : c.equations) o.require(e.lhs == e.rhs, e.name + " differs at " + to_fraction_string(l));
    o.require(c.gap_matches() && c.gap_positive(), "gap at " + to_fraction_string(l));
  }
  o.require(default_lambda_grid().size() == 20, "grid size");
  const auto s = certify_so7_orbit_gap(Rational(3, 2));
  o.require(s.equations[0].lhs == Rational(269, 32) && s.equations[0].rhs == Rational(269, 32), "z^5 spot value");
  o.require(s.gap == Rational(5, 8), "gap spot value");
  o.detail = o.pass ? "20 grid values, 3 identities + gap each; lambda=3/2: z^5 269/32, gap 5/8" : o.detail;
  return o;
}

// 2. numerical refutation at lambda = 3/2
Outcome so7_refutation() {
  Outcome o;
  const MetricParams p(1.0, 1.5);
  const auto r = delta_search(build_so_decomposition(3), p, make_so7_vector(So7Preset::PairA, p), DeltaSearchConfig{});
  o.require(r.restarts_used == 64, "restart count");
  o.require(std::abs(r.start_value - 285.0 / 32.0) < 1e-12, "start value " + sci(r.start_value));
  o.require(r.best_value >= 305.0 / 32.0 - 1e-6, "best value " + sci(r.best_value));
  o.require(r.verdict == Verdict::Refuted, "verdict");
  if (o.pass) o.detail = "start 285/32, best " + std::to_string(r.best_value) + " >= 305/32 - 1e-6, refuted";
  return o;
}

// 3. the two presets share an orbit on the grid
Outcome same_orbit_grid() {
  Outcome o;
  double worst = 0.0;
  for (const Rational& l : default_lambda_grid()) {
    const MetricParams p(1.0, to_double(l));
    const auto a = make_so7_vector(So7Preset::PairA, p).matrix();
    const auto b = make_so7_vector(So7Preset::PairB, p).matrix();
    o.require(same_orbit_so7(a, b), "orbit at " + to_fraction_string(l));
    const auto za = skew_spectrum_so7(a), zb = skew_spectrum_so7(b);
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(za[k] - zb[k]));
  }
  o.require(worst < 1e-8, "spectra differ by " + sci(worst));
  if (o.pass) o.detail = "20 grid values, max spectrum difference " + sci(worst);
  return o;
}

// 4. case analysis margins at 200 interior samples
Outcome case_analysis() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(4, 0));
  // 5% of each interval's width is kept clear at both ends
  std::uniform_real_distribution<double> cd(0.25, 4.75), ux1(0.575, 1.925), ulam(1.05, 1.95);
  double min_margin = HUGE_VAL, min_le = HUGE_VAL;
  for (int s = 0; s < 200; ++s) {
    const double c = cd(rng), d = cd(rng), x1 = ux1(rng);
    const double x2 = x1 * ulam(rng);
    for (const auto& r : prop_main_cases(c, d, MetricParams(x1, x2))) min_margin = std::min(min_margin, r.contradiction_margin);
    const auto le = weighted_norm_inequality(c, d, x1, x2);
    o.require(le.lhs < le.rhs, "inequality fails at a sample");
    min_le = std::min(min_le, le.margin);
  }
  o.require(min_margin > 0.0, "a case margin is not positive");
  o.require(min_le > 0.0, "inequality margin not positive");
  const auto spot = weighted_norm_inequality(1.0, 1.0, 1.0, 1.5);
  o.require(std::abs(spot.lhs - 7.954) < 5e-4 && spot.lhs < 8.0 && spot.rhs == 8.0, "spot value " + sci(spot.lhs));
  if (o.pass)
    o.detail = "200 samples, min case margin " + sci(min_margin) + ", min inequality margin " + sci(min_le) +
               ", spot lhs " + std::to_string(spot.lhs) + " < 8";
  return o;
}

// 5. no improvement of the sp candidate over the sweep
Outcome sp_sweep() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(5, 0));
  std::uniform_real_distribution<double> u(0.1, 2.0);
  std::vector<std::pair<double, double>> pairs;
  for (int k = 0; k < 10; ++k) {
    const double c = u(rng);
    pairs.emplace_back(c, u(rng));
  }
  double worst = -HUGE_VAL;
  int runs = 0;
  for (int l = 2; l <= 4; ++l) {
    const auto dec = build_sp_decomposition(l);
    for (double lam : {1.1, 1.5, 1.9}) {
      const MetricParams p(1.0, lam);
      for (const auto& [c, d] : pairs) {
        const auto r = delta_search(dec, p, make_sp_candidate(l, c, d, p), DeltaSearchConfig{});
        ++runs;
        worst = std::max(worst, r.best_value - r.start_value);
        o.require(r.verdict == Verdict::NotRefuted && r.best_value <= r.start_value + 1e-7,
                  "refuted at l=" + std::to_string(l) + " lambda=" + sci(lam));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " runs not refuted, largest gain " + sci(worst);
  return o;
}

// 6. homomorphisms, Gram matrices, Ad-invariance
Outcome homomorphisms() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(6, 0));
  double dpi = 0.0, tau = 0.0, sigma = 0.0, gram = 0.0, ad = 0.0;
  for (int l = 1; l <= 4; ++l) {
    for (int t = 0; t < 100; ++t) {
      const auto a = random_element(sp_algebra(l), rng), b = random_element(sp_algebra(l), rng);
      dpi = std::max(dpi, max_abs_diff(embed_dpi(bracket(a, b)), bracket(embed_dpi(a), embed_dpi(b))));
      const auto x = random_element(u_algebra(l), rng), y = random_element(u_algebra(l), rng);
      tau = std::max(tau, max_abs_diff(embed_tau_prime(bracket(x, y)).matrix(),
                                       bracket(embed_tau_prime(x), embed_tau_prime(y)).matrix()));
    }
    const auto& basis = sp_algebra(l)->basis();
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        gram = std::max(gram, std::abs(sp_algebra(l)->inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
  }
  for (int l = 2; l <= 4; ++l)
    for (int m = 1; m < l; ++m) {
      auto g1 = so_algebra(2 * m + 1);
      auto g2 = so_algebra(2 * (l - m));
      for (int t = 0; t < 100; ++t) {
        const auto a1 = random_element(g1, rng), b1 = random_element(g1, rng);
        const auto a2 = random_element(g2, rng), b2 = random_element(g2, rng);
        sigma = std::max(sigma, max_abs_diff(embed_sigma(m, l, bracket(a1, b1), bracket(a2, b2)).matrix(),
                                             bracket(embed_sigma(m, l, a1, a2), embed_sigma(m, l, b1, b2)).matrix()));
      }
    }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto q = haar_orthogonal(7, derive_seed(60, s));
    const auto a = random_element(so_algebra(7), rng), b = random_element(so_algebra(7), rng);
    ad = std::max(ad, std::abs(invariant_inner(adjoint_action(q, a), adjoint_action(q, b)) - invariant_inner(a, b)));
    const auto h = haar_symplectic(4, derive_seed(61, s));
    const auto x = random_element(sp_algebra(4), rng), y = random_element(sp_algebra(4), rng);
    ad = std::max(ad, std::abs(invariant_inner(adjoint_action(h, x), adjoint_action(h, y)) - invariant_inner(x, y)));
  }
  o.require(dpi < 1e-11, "complex image residual " + sci(dpi));
  o.require(tau < 1e-11, "u(l) embedding residual " + sci(tau));
  o.require(sigma < 1e-11, "so(2m+1)+so(2k) embedding residual " + sci(sigma));
  o.require(gram < 1e-12, "sp Gram defect " + sci(gram));
  o.require(ad < 1e-10, "Ad-invariance defect " + sci(ad));
  if (o.pass)
    o.detail = "residuals " + sci(dpi) + " / " + sci(tau) + " / " + sci(sigma) + ", Gram " + sci(gram) + ", Ad " + sci(ad);
  return o;
}

// 7. geodesic vectors and uniqueness of completions
Outcome geodesics() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(7, 0));
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const auto so = build_so_decomposition(3);
  auto so7 = so_algebra(7);
  auto F = [&](int i, int j) { return basis_element(so7, BasisKind::F_skew, i, j); };
  double worst = 0.0, uniq = 0.0;
  for (double lam : {1.1, 1.3, 1.5, 1.7, 1.9}) {
    const MetricParams p(1.0, lam);
    const So7Coefficients k{u(rng), u(rng), u(rng)};
    const auto r = geodesic_check(so, p, make_so7_vector(So7Preset::General, p, k), 1e-10);
    worst = std::max({worst, r.residual_zy, r.residual_mix});
    const auto sol = solve_geodesic_completion(so, p, (k.s1 * F(1, 7)).matrix(),
                                               (k.q * (F(1, 6) - F(3, 4)) + k.r * (F(2, 6) - F(3, 5))).matrix());
    o.require(sol.nullity() == 0 && sol.consistent(), "so(7) completion not unique");
    uniq = std::max(uniq, max_abs_diff(sol.particular, ((lam - 1.0) * (k.q * (F(1, 6) + F(3, 4)) + k.r * (F(2, 6) + F(3, 5)))).matrix()));
    for (int l = 2; l <= 4; ++l) {
      const auto rs = geodesic_check(build_sp_decomposition(l), p, make_sp_candidate(l, u(rng), u(rng), p), 1e-10);
      worst = std::max({worst, rs.residual_zy, rs.residual_mix});
    }
  }
  o.require(worst < 1e-10, "geodesic residual " + sci(worst));
  o.require(uniq < 1e-9, "so(7) completion differs from the closed form by " + sci(uniq));

  const MetricParams p(1.0, 1.5);
  const auto sp = build_sp_decomposition(2);
  auto sp2 = sp_algebra(2);
  const auto e12 = basis_element(sp2, BasisKind::E, 1, 2).matrix();
  const auto jg1 = basis_element(sp2, BasisKind::jG, 1).matrix();
  const Matrix<Quaternion> zero(2, 2);
  o.require(solve_geodesic_completion(sp, p, zero, jg1).nullity() == 3, "c = 0 completion dimension");
  o.require(solve_geodesic_completion(sp, p, e12, zero).nullity() == 1, "d = 0 completion dimension");
  const auto both = solve_geodesic_completion(sp, p, 0.7 * e12, 1.2 * jg1);
  o.require(both.nullity() == 0 &&
                max_abs_diff(both.particular, (-p.mu() * 1.2) * basis_element(sp2, BasisKind::jG, 2).matrix()) < 1e-9,
            "c, d nonzero completion");
  if (o.pass) o.detail = "max residual " + sci(worst) + "; completion dimensions 0 | 3, 1, 0";
  return o;
}

// 8. closed-form characteristic polynomial of the candidate
Outcome charpoly_candidate() {
  Outcome o;
  std::mt19937_64 rng(derive_seed(8, 0));
  std::uniform_real_distribution<double> u(0.0, 2.0), lam(1.05, 1.95);
  double worst = 0.0, zero_block = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int l = 2 + t % 3;
    const double x1 = 0.5 + u(rng);
    const MetricParams p(x1, x1 * lam(rng));
    const SpFormCoefficients k{u(rng), u(rng), 0.0, {}};
    const auto num = charpoly(embed_dpi(make_sp_candidate(l, k.c, k.d, p)));
    const auto cf = pol_analytic(SpForm::W, l, k, p);
    if (cf.coeffs.size() != num.coeffs.size()) {
      o.require(false, "degree mismatch");
      continue;
    }
    for (std::size_t i = 0; i < cf.coeffs.size(); ++i) worst = std::max(worst, std::abs(Complex(cf.coeffs[i]) - num.coeffs[i]));
    for (std::size_t pw = 0; pw + 5 <= static_cast<std::size_t>(2 * l); ++pw)
      zero_block = std::max(zero_block, std::abs(num.at_power(pw)));
  }
  o.require(worst < 1e-10, "coefficient error " + sci(worst));
  o.require(zero_block < 1e-12, "zero block " + sci(zero_block));
  if (o.pass) o.detail = "50 draws, max coefficient error " + sci(worst) + ", zero block " + sci(zero_block);
  return o;
}

// 9. pinching endpoints and interior
Outcome pinching() {
  Outcome o;
  o.require(pinching_constant(Rational(1)) == Rational(1, 16), "x2 = x1");
  o.require(pinching_constant(Rational(2)) == Rational(1, 4), "x2 = 2 x1");
  for (const Rational& l : default_lambda_grid()) {
    const Rational e = pinching_constant(l);
    o.require(e > Rational(1, 16) && e < Rational(1, 4), "interior value at " + to_fraction_string(l));
  }
  if (o.pass) o.detail = "1/16 at x2 = x1, 1/4 at x2 = 2 x1, interior grid inside (1/16, 1/4)";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact orbit-gap certificates", 1.0, exact_certificates},
      {2, "orbit refutation on SO(7)/U(3)", 60.0, so7_refutation},
      {3, "same orbit for the two so(7) presets", 10.0, same_orbit_grid},
      {4, "case-analysis margins", 10.0, case_analysis},
      {5, "sp non-refutation sweep", 300.0, sp_sweep},
      {6, "homomorphism and isometry suite", 60.0, homomorphisms},
      {7, "geodesic-vector suite", 60.0, geodesics},
      {8, "closed-form charpoly of the candidate", 10.0, charpoly_candidate},
      {9, "pinching table", 1.0, pinching},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.budget_s) o.require(false, "runtime " + sci(secs) + " s over budget " + sci(c.budget_s) + " s");
    std::printf("%s %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
