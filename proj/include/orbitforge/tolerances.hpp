#pragma once

namespace orbitforge::tol {

// Membership and orthonormality assertions.
inline constexpr double kStructural = 1e-12;
// Eigenvalues, characteristic-polynomial coefficients, orbit comparisons.
inline constexpr double kSpectral = 1e-9;
// Optimization verdicts.
inline constexpr double kCertificate = 1e-7;

inline constexpr double kGroupMembership = 1e-10;
inline constexpr double kSameOrbit = 1e-8;
inline constexpr double kSingularValueCutoff = 1e-8;

}  // namespace orbitforge::tol
