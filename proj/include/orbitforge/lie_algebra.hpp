#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "orbitforge/matrix.hpp"

namespace orbitforge {

enum class Family { SO, SP, U, SU };

std::string to_string(Family f);

/// Named basis patterns. F_skew is E_ij - E_ji in so(n); the rest follow the
/// quaternionic conventions of sp(l): E_ij skew real, F_ij symmetric real,
/// G_i = sqrt(2) at (i, i).
enum class BasisKind { E, F_skew, F_sym, iF, jF, kF, iG, jG, kG };

/// Matrix Lie algebra with a fixed orthonormal basis and an Ad-invariant inner product.
///
/// Inner products:
///   so(n):        <A, B> = -1/2 tr(AB)        = 1/2 Re tr(A B*)
///   sp(l):        <A, B> =  1/2 tr Re(A B*)
///   u(l), su(n):  <A, B> =  Re tr(A B*)       (makes u(l) -> so(2l) isometric)
///
/// Basis order: so(n) is F_ij in lexicographic (i, j). sp(l) is iG_i, jG_i, kG_i for
/// i = 1..l, then E_ij, then iF_ij, jF_ij, kF_ij (each family lexicographic in (i, j)).
/// u(l) is i e_kk, then (e_ij - e_ji)/sqrt2, then i(e_ij + e_ji)/sqrt2. su(n) replaces
/// the diagonal part by the normalized traceless diagonals.
template <class T>
class LieAlgebra {
 public:
  LieAlgebra(Family family, int rank, std::size_t matrix_size, std::vector<Matrix<T>> basis,
             std::vector<std::string> labels, double inner_scale);

  Family family() const { return family_; }
  int rank() const { return rank_; }
  std::size_t matrix_size() const { return size_; }
  std::size_t dimension() const { return basis_.size(); }
  const std::vector<Matrix<T>>& basis() const { return basis_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string name() const;

  double inner(const Matrix<T>& a, const Matrix<T>& b) const { return scale_ * frobenius_dot(a, b); }
  /// Factor c in <A, B> = c Re tr(A B*).
  double inner_scale() const { return scale_; }
  double norm(const Matrix<T>& a) const { return std::sqrt(inner(a, a)); }

  std::vector<double> coordinates(const Matrix<T>& m) const;
  Matrix<T> assemble(std::span<const double> coords) const;

  /// Structural membership: skew (A* = -A), plus trace zero for su(n).
  bool contains(const Matrix<T>& m, double tol = 1e-12) const;

  bool same_as(const LieAlgebra& o) const { return family_ == o.family_ && rank_ == o.rank_; }

 private:
  Family family_;
  int rank_;
  std::size_t size_;
  std::vector<Matrix<T>> basis_;
  std::vector<std::string> labels_;
  double scale_;
};

template <class T>
using AlgebraPtr = std::shared_ptr<const LieAlgebra<T>>;

// Shared, lazily built descriptors. Thread-safe.
AlgebraPtr<double> so_algebra(int n);
AlgebraPtr<Quaternion> sp_algebra(int l);
AlgebraPtr<Complex> u_algebra(int l);
AlgebraPtr<Complex> su_algebra(int n);

/// A member of a matrix Lie algebra: its coordinates in the canonical basis and its matrix.
template <class T>
class AlgebraElement {
 public:
  /// Validates membership and computes coordinates. Throws PreconditionError otherwise.
  static AlgebraElement from_matrix(AlgebraPtr<T> algebra, Matrix<T> m);
  static AlgebraElement from_coords(AlgebraPtr<T> algebra, std::vector<double> coords);
  static AlgebraElement zero(AlgebraPtr<T> algebra);

  const LieAlgebra<T>& algebra() const { return *algebra_; }
  const AlgebraPtr<T>& algebra_ptr() const { return algebra_; }
  std::span<const double> coords() const { return coords_; }
  const Matrix<T>& matrix() const { return matrix_; }

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(double s);

 private:
  AlgebraElement(AlgebraPtr<T> a, std::vector<double> c, Matrix<T> m)
      : algebra_(std::move(a)), coords_(std::move(c)), matrix_(std::move(m)) {}

  AlgebraPtr<T> algebra_;
  std::vector<double> coords_;
  Matrix<T> matrix_;
};

template <class T>
AlgebraElement<T> operator+(AlgebraElement<T> a, const AlgebraElement<T>& b) {
  return a += b;
}
template <class T>
AlgebraElement<T> operator-(AlgebraElement<T> a, const AlgebraElement<T>& b) {
  return a -= b;
}
template <class T>
AlgebraElement<T> operator*(double s, AlgebraElement<T> a) {
  return a *= s;
}
template <class T>
AlgebraElement<T> operator-(AlgebraElement<T> a) {
  return a *= -1.0;
}

/// Unit basis matrix of the named kind with 1-based indices (j ignored for G kinds).
template <class T>
AlgebraElement<T> basis_element(const AlgebraPtr<T>& algebra, BasisKind kind, int i, int j = 0);

template <class T>
AlgebraElement<T> bracket(const AlgebraElement<T>& a, const AlgebraElement<T>& b);

template <class T>
double invariant_inner(const AlgebraElement<T>& a, const AlgebraElement<T>& b);

/// Q X Q^{-1} for Q in the group of X's algebra (Q* Q = I, det Q = 1 for so).
template <class T>
AlgebraElement<T> adjoint_action(const Matrix<T>& q, const AlgebraElement<T>& x);

/// Raw pattern matrix of a basis kind, size n, 1-based indices; no membership check.
template <class T>
Matrix<T> pattern_matrix(std::size_t n, BasisKind kind, int i, int j);

}  // namespace orbitforge
