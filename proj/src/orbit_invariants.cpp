#include "orbitforge/orbit_invariants.hpp"

#include <algorithm>
#include <cmath>

#include "orbitforge/linalg.hpp"

namespace orbitforge {

bool same_orbit_so7(const Matrix<double>& a, const Matrix<double>& b, double tol) {
  const auto za = skew_spectrum_so7(a);
  const auto zb = skew_spectrum_so7(b);
  for (std::size_t k = 0; k < 3; ++k)
    if (std::abs(za[k] - zb[k]) > tol) return false;
  return true;
}

bool same_orbit_so7(const AlgebraElement<double>& a, const AlgebraElement<double>& b, double tol) {
  return same_orbit_so7(a.matrix(), b.matrix(), tol);
}

std::optional<Matrix<double>> orbit_conjugator_so7(const Matrix<double>& a, const Matrix<double>& b, double tol) {
  if (!same_orbit_so7(a, b, tol)) return std::nullopt;
  // Q_a^T A Q_a = D = Q_b^T B Q_b, hence B = (Q_b Q_a^T) A (Q_b Q_a^T)^T.
  const SkewCanonicalForm fa = skew_canonical_form(a);
  const SkewCanonicalForm fb = skew_canonical_form(b);
  return fb.conjugator * transpose(fa.conjugator);
}

So7SquaredCoefficients so7_squared_coefficients(So7Preset preset, const Rational& lambda) {
  if (!(lambda > 1 && lambda < 2)) throw DomainError("so(7) presets need lambda in (1, 2)");
  const Rational t2 = (2 - lambda) * (2 - lambda);
  const Rational l2 = lambda * lambda;
  const Rational l3 = l2 * lambda;
  switch (preset) {
    case So7Preset::PairA: {
      const Rational den = t2 + l3 - 1;
      return {l2 * den, Rational(1), l3 * t2 / den};
    }
    case So7Preset::PairB: {
      const Rational den = t2 + l2 * l2 * (lambda - 1);
      return {den, l2, l3 * t2 / den};
    }
    case So7Preset::General: break;
  }
  throw PreconditionError("squared coefficients are closed-form only for the two presets");
}

std::array<Rational, 3> so7_charpoly_tail(const So7SquaredCoefficients& k, const Rational& lambda) {
  const Rational t2 = (2 - lambda) * (2 - lambda);
  const Rational l2 = lambda * lambda;
  return {k.a + k.b * (l2 + t2), k.a * k.b * t2 + k.a * k.c * l2 + k.b * k.b * l2 * t2,
          k.a * k.b * k.c * l2 * t2};
}

bool OrbitGapCertificate::holds() const {
  return std::all_of(equations.begin(), equations.end(), [](const RationalIdentity& e) { return e.holds(); }) &&
         gap_matches() && gap_positive();
}

OrbitGapCertificate certify_so7_orbit_gap(const Rational& lambda) {
  if (!(lambda > 1 && lambda < 2)) throw DomainError("the orbit-gap certificate needs lambda in (1, 2)");
  OrbitGapCertificate cert;
  cert.lambda = lambda;
  cert.start = so7_squared_coefficients(So7Preset::PairA, lambda);
  cert.target = so7_squared_coefficients(So7Preset::PairB, lambda);
  const auto lhs = so7_charpoly_tail(cert.start, lambda);
  const auto rhs = so7_charpoly_tail(cert.target, lambda);
  static const char* names[3] = {"z^5 coefficient", "z^3 coefficient", "z^1 coefficient"};
  for (std::size_t k = 0; k < 3; ++k) cert.equations[k] = RationalIdentity{names[k], lhs[k], rhs[k]};
  cert.start_norm = cert.start.a + 2 * lambda * cert.start.b;
  cert.target_norm = cert.target.a + 2 * lambda * cert.target.b;
  cert.gap = cert.target_norm - cert.start_norm;
  cert.gap_formula = 2 * (2 - lambda) * (lambda * lambda - 1) * (lambda - 1);
  return cert;
}

namespace {

// z^2 + s
template <class T>
PolyCoeffs<T> quadratic(const T& s) {
  return PolyCoeffs<T>(std::vector<T>{T(1), T{}, s});
}

// z^4 + p z^2 + q
template <class T>
PolyCoeffs<T> biquadratic(const T& p, const T& q) {
  return PolyCoeffs<T>(std::vector<T>{T(1), T{}, p, T{}, q});
}

}  // namespace

template <class T>
PolyCoeffs<T> pol_analytic(SpForm form, int l, const PolParameters<T>& k) {
  if (l < 2) throw PreconditionError("pol_analytic needs l >= 2");
  const int first_free = form == SpForm::W1 ? 2 : 3;
  const auto slots = static_cast<std::size_t>(l - first_free + 1);
  if (form != SpForm::W && k.alpha_q.size() > slots) throw PreconditionError("too many alpha_q coefficients");

  PolyCoeffs<T> p;
  switch (form) {
    case SpForm::W1:
      p = quadratic<T>(2 * k.d * k.d);
      break;
    case SpForm::W2: {
      const T c2 = k.c * k.c;
      const T a2 = 2 * k.alpha * k.alpha;
      p = biquadratic<T>(2 * (c2 + a2), (c2 - a2) * (c2 - a2));
      break;
    }
    case SpForm::W3:
    case SpForm::W: {
      const T c2 = k.c * k.c;
      const T d2 = k.d * k.d;
      const T s = c2 + d2 * (1 + k.mu * k.mu);
      const T q = c2 + 2 * d2 * k.mu;
      p = biquadratic<T>(2 * s, q * q);
      break;
    }
  }
  for (std::size_t q = 0; q < slots; ++q) {
    if (form != SpForm::W && q < k.alpha_q.size()) {
      p = multiply(p, quadratic<T>(2 * k.alpha_q[q] * k.alpha_q[q]));
    } else {
      p = multiply(p, PolyCoeffs<T>::monomial(2));
    }
  }
  return p;
}

template PolyCoeffs<double> pol_analytic(SpForm, int, const PolParameters<double>&);
template PolyCoeffs<Rational> pol_analytic(SpForm, int, const PolParameters<Rational>&);

PolyCoeffs<double> pol_analytic(SpForm form, int l, const SpFormCoefficients& k, const MetricParams& params) {
  return pol_analytic<double>(form, l, PolParameters<double>{k.c, k.d, k.alpha, k.alpha_q, params.mu()});
}

std::array<CaseAnalysisRecord, 3> prop_main_cases(double c, double d, const MetricParams& params) {
  if (!(c > 0.0 && d > 0.0)) throw DomainError("case analysis needs c > 0 and d > 0");
  const double x1 = params.x1();
  const double x2 = params.x2();
  if (!(x1 < x2 && x2 < 2.0 * x1)) throw DomainError("case analysis needs x1 < x2 < 2 x1");
  const double lambda = params.lambda();
  const double mu = params.mu();
  const double c2 = c * c;
  const double d2 = d * d;
  // Every form must reproduce z^4 + 2 s z^2 + p^2 (times a power of z).
  const double s = c2 + d2 * (1.0 + mu * mu);
  const double p = c2 + 2.0 * d2 * mu;

  std::array<CaseAnalysisRecord, 3> out;

  // Form 1: d~^2 + a^2 = s, 2 d~ |a| = p, so d~ +- |a| = sqrt(s + p), sqrt(s - p).
  {
    CaseAnalysisRecord& r = out[0];
    r.case_id = 1;
    const double root_plus = std::sqrt(2.0 * c2 + lambda * lambda * d2);  // sqrt(s + p)
    const double root_minus = d * (2.0 - lambda);                         // sqrt(s - p)
    r.d_tilde = 0.5 * (root_plus + root_minus);  // the larger of the two admissible values
    r.alpha_q = 0.5 * (root_plus - root_minus);
    r.matching_residual = std::max(std::abs(r.d_tilde * r.d_tilde + r.alpha_q * r.alpha_q - s),
                                   std::abs(2.0 * r.d_tilde * r.alpha_q - p));
    // x1 c^2 + x2 d^2 - x2 d~^2, rewritten as x1 (2 - lambda)/2 * c^4 / (u + v) with
    // u = c^2 + lambda^2 d^2, v = lambda d sqrt(2c^2 + lambda^2 d^2), since u^2 - v^2 = c^4.
    const double u = c2 + lambda * lambda * d2;
    const double v = lambda * d * root_plus;
    r.contradiction_margin = x1 * 0.5 * (2.0 - lambda) * c2 * c2 / (u + v);
  }
  // Form 2: c~^2 + 2a^2 = s, |c~^2 - 2a^2| = p; the larger c~ has c~^2 = (s + p)/2.
  {
    CaseAnalysisRecord& r = out[1];
    r.case_id = 2;
    r.c_tilde = std::sqrt(0.5 * (s + p));
    r.alpha = 0.5 * d * (1.0 - mu);  // 2a^2 = (s - p)/2 = d^2 (1 - mu)^2 / 2
    const double ct2 = r.c_tilde * r.c_tilde;
    const double a2 = 2.0 * r.alpha * r.alpha;
    r.matching_residual = std::max(std::abs(ct2 + a2 - s), std::abs(std::abs(ct2 - a2) - p));
    // value - x1 s = x1 d^2 (lambda - 1 - mu^2) = x1 d^2 mu (1 - mu)
    r.contradiction_margin = x1 * d2 * mu * (1.0 - mu);
  }
  // Form 3: C + (1 + mu^2) D = s, C + 2 mu D = p in (C, D) = (c~^2, d~^2).
  {
    CaseAnalysisRecord& r = out[2];
    r.case_id = 3;
    const double det = 2.0 * mu - (1.0 + mu * mu);  // -(1 - mu)^2
    const double dt2 = (p - s) / det;
    const double ct2 = s - (1.0 + mu * mu) * dt2;
    r.d_tilde = std::sqrt(std::max(0.0, dt2));
    r.c_tilde = std::sqrt(std::max(0.0, ct2));
    r.matching_residual = std::max(std::abs(r.d_tilde - d), std::abs(r.c_tilde - c));
    // The system is nonsingular, so the value x2 d~^2 + x1 c~^2 equals x2 d^2 + x1 c^2
    // and cannot exceed it. The margin reports how far the system is from singular.
    r.contradiction_margin = std::abs(det);
  }
  return out;
}

InequalitySides weighted_norm_inequality(double c, double d, double x1, double x2) {
  InequalitySides out;
  const double ad = std::abs(d);
  const double delta = 2.0 * x1 - x2;
  const double root = std::sqrt(c * c * x1 * x1 + d * d * x2 * x2);
  const double t = ad * delta + root;
  out.lhs = t * t * x2;
  out.rhs = 2.0 * x1 * x1 * (x1 * c * c + 2.0 * x2 * d * d);
  // rhs - lhs = delta (u - v), u = c^2 x1^2 + 2 x2^2 d^2, v = 2 x2 |d| root, u^2 - v^2 = c^4 x1^4.
  const double u = c * c * x1 * x1 + 2.0 * x2 * x2 * d * d;
  const double v = 2.0 * x2 * ad * root;
  const double c2x2 = c * c * x1 * x1;
  out.margin = (u + v) > 0.0 ? delta * c2x2 * c2x2 / (u + v) : 0.0;
  return out;
}

Rational pinching_constant(const Rational& lambda) {
  if (lambda < 1 || lambda > 2) throw DomainError("pinching constant is tabulated for lambda in [1, 2]");
  const Rational q = lambda / 4;
  return q * q;
}

}  // namespace orbitforge
