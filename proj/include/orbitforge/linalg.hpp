#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "orbitforge/matrix.hpp"
#include "orbitforge/polynomial.hpp"

namespace orbitforge {

// ---------------------------------------------------------------------------
// Characteristic polynomials det(zI - M).
//
// Rational input is handled exactly by Faddeev-LeVerrier. Floating input goes
// through an eigenvalue solve (Hermitian solver for (skew-)Hermitian input,
// Hessenberg-QR otherwise) and the roots are re-expanded in double-double
// arithmetic. Quaternionic input has no characteristic polynomial here; route
// it through embed_dpi first.
// ---------------------------------------------------------------------------
PolyCoeffs<Rational> charpoly(const Matrix<Rational>& m);
PolyCoeffs<double> charpoly(const Matrix<double>& m);
PolyCoeffs<Complex> charpoly(const Matrix<Complex>& m);
[[noreturn]] PolyCoeffs<Complex> charpoly(const Matrix<Quaternion>& m);

/// Expand prod (z - r_i) with compensated arithmetic.
PolyCoeffs<Complex> expand_roots(const std::vector<Complex>& roots);

/// Eigenvalues of a square complex or real matrix (unordered).
std::vector<Complex> eigenvalues(const Matrix<double>& m);
std::vector<Complex> eigenvalues(const Matrix<Complex>& m);

double determinant(const Matrix<double>& m);

// ---------------------------------------------------------------------------
// Group elements.
// ---------------------------------------------------------------------------

/// (I - U/2)^{-1} (I + U/2). Throws RetractionFailure when I - U/2 is numerically singular.
Matrix<double> cayley_retract(const Matrix<double>& u);
Matrix<Complex> cayley_retract(const Matrix<Complex>& u);
/// Quaternionic input is retracted through its complex 2l x 2l image and pulled back.
Matrix<Quaternion> cayley_retract(const Matrix<Quaternion>& u);

/// max |Q* Q - I|.
template <class T>
double unitarity_defect(const Matrix<T>& q) {
  return max_abs_diff(adjoint(q) * q, Matrix<T>::identity(q.rows()));
}

/// Haar-distributed element of SO(n), deterministic in seed.
Matrix<double> haar_orthogonal(int n, std::uint64_t seed);
/// Haar-distributed element of Sp(l) (quaternionic unitary), deterministic in seed.
Matrix<Quaternion> haar_symplectic(int l, std::uint64_t seed);

/// Mix (base, index) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// ---------------------------------------------------------------------------
// Quaternionic <-> complex block form:  A + jB  <->  [[A, -conj(B)], [B, conj(A)]].
// ---------------------------------------------------------------------------
Matrix<Complex> to_complex_block(const Matrix<Quaternion>& q);
/// Inverse of to_complex_block; reads the left block column only.
Matrix<Quaternion> from_complex_block(const Matrix<Complex>& c);

// ---------------------------------------------------------------------------
// Skew-symmetric normal forms.
// ---------------------------------------------------------------------------

/// Rotation rates z1 >= z2 >= ... >= 0 of a real skew matrix, together with
/// Q in SO(n) such that Q^T M Q = diag([[0,-z1],[z1,0]], ..., 0...).
struct SkewCanonicalForm {
  std::vector<double> rates;
  Matrix<double> conjugator;
};

SkewCanonicalForm skew_canonical_form(const Matrix<double>& m);

/// The so(7) Weyl-chamber representative (z1, z2, z3), sorted descending.
std::array<double, 3> skew_spectrum_so7(const Matrix<double>& m);

}  // namespace orbitforge
