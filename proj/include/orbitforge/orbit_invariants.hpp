#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "orbitforge/homogeneous_space.hpp"
#include "orbitforge/polynomial.hpp"
#include "orbitforge/rational.hpp"
#include "orbitforge/tolerances.hpp"

namespace orbitforge {

// ---------------------------------------------------------------------------
// so(7) orbits.
// ---------------------------------------------------------------------------

/// True iff the Weyl-chamber representatives of A and B agree componentwise to tol.
/// Two elements of so(7) share an adjoint orbit exactly when this holds.
bool same_orbit_so7(const Matrix<double>& a, const Matrix<double>& b, double tol = tol::kSameOrbit);
bool same_orbit_so7(const AlgebraElement<double>& a, const AlgebraElement<double>& b,
                    double tol = tol::kSameOrbit);

/// Q in SO(7) with Q A Q^T = B, assembled from the canonical forms of A and B.
/// Empty when the two are not in one orbit.
std::optional<Matrix<double>> orbit_conjugator_so7(const Matrix<double>& a, const Matrix<double>& b,
                                                   double tol = tol::kSameOrbit);

// ---------------------------------------------------------------------------
// Exact identities for the two so(7) geodesic vectors.
// ---------------------------------------------------------------------------

struct RationalIdentity {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

/// Closed-form squared coefficients of the two so(7) presets:
/// a = s1^2, b = q^2 + r^2, c = r^2 (and the same for the second vector).
struct So7SquaredCoefficients {
  Rational a, b, c;
};
So7SquaredCoefficients so7_squared_coefficients(So7Preset preset, const Rational& lambda);

/// z^5, z^3 and z^1 coefficients of det(zI - W) for a vector with squared coefficients (a, b, c).
std::array<Rational, 3> so7_charpoly_tail(const So7SquaredCoefficients& k, const Rational& lambda);

/// Certificate that the first preset shares its orbit with the second while having a
/// strictly smaller p-norm: the three coefficient equations hold exactly and the norm gap
/// equals 2(2 - lambda)(lambda^2 - 1)(lambda - 1) > 0.
struct OrbitGapCertificate {
  Rational lambda;
  So7SquaredCoefficients start;
  So7SquaredCoefficients target;
  std::array<RationalIdentity, 3> equations;  // z^5, z^3, z^1 coefficients
  Rational start_norm;   // a + 2 lambda b     (p-norm / x1)
  Rational target_norm;  // a~ + 2 lambda b~
  Rational gap;          // target_norm - start_norm
  Rational gap_formula;  // 2(2 - lambda)(lambda^2 - 1)(lambda - 1)

  bool gap_matches() const { return gap == gap_formula; }
  bool gap_positive() const { return gap > 0; }
  bool holds() const;
};

/// Throws DomainError unless 1 < lambda < 2.
OrbitGapCertificate certify_so7_orbit_gap(const Rational& lambda);

// ---------------------------------------------------------------------------
// Characteristic polynomials of the sp(l) normal forms through the complex image.
// ---------------------------------------------------------------------------

/// Free parameters of a normal form; mu = (x2 - x1)/x1. alpha_q follows SpFormCoefficients.
template <class T>
struct PolParameters {
  T c{};
  T d{};
  T alpha{};
  std::vector<T> alpha_q;
  T mu{};
};

/// Closed-form characteristic polynomial of the complex image of a normal form, degree 2l.
template <class T>
PolyCoeffs<T> pol_analytic(SpForm form, int l, const PolParameters<T>& k);

PolyCoeffs<double> pol_analytic(SpForm form, int l, const SpFormCoefficients& k, const MetricParams& params);

// ---------------------------------------------------------------------------
// Coefficient matching against the three normal forms.
// ---------------------------------------------------------------------------

struct CaseAnalysisRecord {
  int case_id = 0;
  double d_tilde = 0.0;
  double c_tilde = 0.0;
  double alpha = 0.0;
  double alpha_q = 0.0;
  /// Case 1: x1 c^2 + x2 d^2 - x2 d~^2. Case 2: x1 c^2 + x2 d^2 - x1 (c~^2 + 2 alpha^2).
  /// Case 3: |det| of the matching system, (1 - mu)^2; the solution is forced to (c, d).
  double contradiction_margin = 0.0;
  /// Largest residual of the matching equations at the reported solution.
  double matching_residual = 0.0;
};

/// Throws DomainError unless c, d > 0 and x1 < x2 < 2 x1.
std::array<CaseAnalysisRecord, 3> prop_main_cases(double c, double d, const MetricParams& params);

/// Both sides of (|d|(2x1 - x2) + sqrt(c^2 x1^2 + d^2 x2^2))^2 x2 < 2 x1^2 (x1 c^2 + 2 x2 d^2),
/// plus rhs - lhs evaluated without cancellation.
struct InequalitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};
InequalitySides weighted_norm_inequality(double c, double d, double x1, double x2);

// ---------------------------------------------------------------------------
// Curvature pinching of the Sp family metrics.
// ---------------------------------------------------------------------------

/// (lambda / 4)^2 for lambda = x2/x1 in [1, 2]. Throws DomainError outside.
Rational pinching_constant(const Rational& lambda);

}  // namespace orbitforge
