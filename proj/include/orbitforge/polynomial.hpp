#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

/// Monic polynomial z^n + c1 z^(n-1) + ... + cn, stored with descending powers (coeffs[0] == 1).
template <class T>
struct PolyCoeffs {
  std::vector<T> coeffs{T(1)};

  PolyCoeffs() = default;
  explicit PolyCoeffs(std::vector<T> descending) : coeffs(std::move(descending)) {
    if (coeffs.empty()) throw ShapeError("polynomial needs at least the leading coefficient");
  }

  std::size_t degree() const { return coeffs.size() - 1; }

  /// Coefficient of z^power (zero above the degree).
  T at_power(std::size_t power) const {
    if (power > degree()) return T{};
    return coeffs[degree() - power];
  }

  /// z^n
  static PolyCoeffs monomial(std::size_t n) {
    std::vector<T> c(n + 1, T{});
    c[0] = T(1);
    return PolyCoeffs(std::move(c));
  }

  friend bool operator==(const PolyCoeffs&, const PolyCoeffs&) = default;
};

/// Product of two descending-power coefficient lists.
template <class T>
PolyCoeffs<T> multiply(const PolyCoeffs<T>& a, const PolyCoeffs<T>& b) {
  std::vector<T> c(a.coeffs.size() + b.coeffs.size() - 1, T{});
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return PolyCoeffs<T>(std::move(c));
}

template <class T>
std::ostream& operator<<(std::ostream& os, const PolyCoeffs<T>& p) {
  os << "[";
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) os << (i ? ", " : "") << p.coeffs[i];
  return os << "]";
}

}  // namespace orbitforge
