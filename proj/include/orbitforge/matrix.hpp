#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "orbitforge/errors.hpp"
#include "orbitforge/quaternion.hpp"
#include "orbitforge/rational.hpp"

namespace orbitforge {

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool floating = true;
  static constexpr const char* name = "real";
  static double conj(double v) { return v; }
  static double dot(double a, double b) { return a * b; }
  static double abs(double v) { return std::abs(v); }
  static bool finite(double v) { return std::isfinite(v); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool floating = true;
  static constexpr const char* name = "complex";
  static Complex conj(const Complex& v) { return std::conj(v); }
  static double dot(const Complex& a, const Complex& b) { return a.real() * b.real() + a.imag() * b.imag(); }
  static double abs(const Complex& v) { return std::abs(v); }
  static bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
};

template <>
struct ScalarTraits<Quaternion> {
  static constexpr bool floating = true;
  static constexpr const char* name = "quaternion";
  static Quaternion conj(const Quaternion& v) { return orbitforge::conj(v); }
  static double dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  }
  static double abs(const Quaternion& v) { return orbitforge::abs(v); }
  static bool finite(const Quaternion& v) {
    return std::isfinite(v.w) && std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool floating = false;
  static constexpr const char* name = "rational";
  static const Rational& conj(const Rational& v) { return v; }
  static double abs(const Rational& v) { return std::abs(to_double(v)); }
  static bool finite(const Rational&) { return true; }
};

template <class T>
concept FloatingScalar = ScalarTraits<T>::floating;

/// Dense row-major matrix over a real, complex, quaternionic or exact-rational scalar.
///
/// Products keep operand order entrywise, so quaternionic matrices multiply correctly.
template <class T>
class Matrix {
 public:
  using Scalar = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
      throw ShapeError("matrix entry count " + std::to_string(data_.size()) + " does not match " +
                       std::to_string(rows) + "x" + std::to_string(cols));
    }
  }

  static Matrix zero(std::size_t n) { return Matrix(n, n); }
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> entries() { return data_; }
  std::span<const T> entries() const { return data_; }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "+");
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "-");
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
    return *this;
  }
  // Right multiplication of every entry: m(i,j) <- m(i,j) * s.
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v = v * s;
    return *this;
  }
  Matrix& operator*=(double s)
    requires(!std::is_same_v<T, double> && !std::is_same_v<T, Rational>)
  {
    for (auto& v : data_) v = v * s;
    return *this;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  void require_same_shape(const Matrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw ShapeError(std::string("shape mismatch in '") + op + "': " + std::to_string(rows_) + "x" +
                       std::to_string(cols_) + " vs " + std::to_string(o.rows_) + "x" +
                       std::to_string(o.cols_));
    }
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  return a += b;
}
template <class T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  return a -= b;
}
template <class T>
Matrix<T> operator-(Matrix<T> a) {
  for (auto& v : a.entries()) v = -v;
  return a;
}
template <class T>
Matrix<T> operator*(Matrix<T> a, const T& s) {
  return a *= s;
}
template <class T>
Matrix<T> operator*(const T& s, Matrix<T> a) {
  for (auto& v : a.entries()) v = s * v;
  return a;
}
template <class T>
  requires(!std::is_same_v<T, double> && !std::is_same_v<T, Rational>)
Matrix<T> operator*(double s, Matrix<T> a) {
  return a *= s;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " by " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

/// AB - BA for square matrices of equal size.
template <class T>
Matrix<T> bracket(const Matrix<T>& a, const Matrix<T>& b) {
  if (!a.square() || !b.square() || a.rows() != b.rows()) {
    throw ShapeError("bracket needs two square matrices of equal size");
  }
  return a * b - b * a;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

/// Conjugate transpose.
template <class T>
Matrix<T> adjoint(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = ScalarTraits<T>::conj(a(i, j));
  return t;
}

template <class T>
T trace(const Matrix<T>& a) {
  if (!a.square()) throw ShapeError("trace of a non-square matrix");
  T s{};
  for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
  return s;
}

/// Sum over entries of the real component dot product; equals Re tr(A B*).
template <FloatingScalar T>
double frobenius_dot(const Matrix<T>& a, const Matrix<T>& b) {
  a.require_same_shape(b, "frobenius_dot");
  double s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t n = 0; n < ea.size(); ++n) s += ScalarTraits<T>::dot(ea[n], eb[n]);
  return s;
}

template <FloatingScalar T>
double frobenius_norm(const Matrix<T>& a) {
  return std::sqrt(frobenius_dot(a, a));
}

template <class T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const auto& v : a.entries()) m = std::max(m, ScalarTraits<T>::abs(v));
  return m;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b) {
  return max_abs(a - b);
}

/// A* = -A entrywise within tol (skew-symmetric for reals, skew-Hermitian otherwise).
template <class T>
bool is_skew(const Matrix<T>& a, double tol = 1e-12) {
  if (!a.square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      if (ScalarTraits<T>::abs(a(i, j) + ScalarTraits<T>::conj(a(j, i))) > tol) return false;
  return true;
}

template <class T>
bool is_symmetric(const Matrix<T>& a, double tol = 1e-12) {
  if (!a.square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (ScalarTraits<T>::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

template <class T>
bool all_finite(const Matrix<T>& a) {
  return std::all_of(a.entries().begin(), a.entries().end(),
                     [](const T& v) { return ScalarTraits<T>::finite(v); });
}

/// Copies a real matrix into another scalar kind.
template <class To>
Matrix<To> promote(const Matrix<double>& a) {
  Matrix<To> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = To(a(i, j));
  return out;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Matrix<T>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i == 0 ? "[" : " ");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << (i + 1 == m.rows() ? "]" : "\n");
  }
  return os;
}

}  // namespace orbitforge
