#include "orbitforge/lie_algebra.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "orbitforge/linalg.hpp"
#include "orbitforge/tolerances.hpp"

namespace orbitforge {

std::string to_string(Family f) {
  switch (f) {
    case Family::SO: return "so";
    case Family::SP: return "sp";
    case Family::U: return "u";
    case Family::SU: return "su";
  }
  return "?";
}

namespace {

const double kSqrt2 = std::sqrt(2.0);

const char* kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::E: return "E";
    case BasisKind::F_skew: return "F";
    case BasisKind::F_sym: return "Fsym";
    case BasisKind::iF: return "iF";
    case BasisKind::jF: return "jF";
    case BasisKind::kF: return "kF";
    case BasisKind::iG: return "iG";
    case BasisKind::jG: return "jG";
    case BasisKind::kG: return "kG";
  }
  return "?";
}

bool is_g_kind(BasisKind k) { return k == BasisKind::iG || k == BasisKind::jG || k == BasisKind::kG; }

// Imaginary unit of the requested component, if the scalar kind has one.
template <class T>
T unit_for(BasisKind k) {
  const char comp = kind_name(k)[0];
  if (comp != 'i' && comp != 'j' && comp != 'k') return T(1);
  if constexpr (std::is_same_v<T, Quaternion>) {
    return comp == 'i' ? Quaternion::i() : comp == 'j' ? Quaternion::j() : Quaternion::k();
  } else if constexpr (std::is_same_v<T, Complex>) {
    if (comp == 'i') return Complex(0.0, 1.0);
  }
  throw UnsupportedScalarError(std::string("basis kind ") + kind_name(k) + " needs quaternionic entries, not " +
                               ScalarTraits<T>::name);
}

std::string index_label(BasisKind k, int i, int j) {
  if (is_g_kind(k)) return std::string(kind_name(k)) + std::to_string(i);
  return std::string(kind_name(k)) + std::to_string(i) + "," + std::to_string(j);
}

template <class T>
void check_orthonormal(const LieAlgebra<T>& alg) {
  const auto& b = alg.basis();
  for (std::size_t p = 0; p < b.size(); ++p)
    for (std::size_t q = p; q < b.size(); ++q) {
      const double expected = p == q ? 1.0 : 0.0;
      if (std::abs(alg.inner(b[p], b[q]) - expected) > tol::kStructural) {
        throw ConstructionError("basis of " + alg.name() + " is not orthonormal at (" + alg.labels()[p] + ", " +
                                alg.labels()[q] + ")");
      }
    }
}

std::shared_ptr<LieAlgebra<double>> build_so(int n) {
  if (n < 1) throw ConstructionError("so(n) needs n >= 1");
  const auto sz = static_cast<std::size_t>(n);
  std::vector<Matrix<double>> basis;
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      basis.push_back(pattern_matrix<double>(sz, BasisKind::F_skew, i, j));
      labels.push_back(index_label(BasisKind::F_skew, i, j));
    }
  return std::make_shared<LieAlgebra<double>>(Family::SO, n, sz, std::move(basis), std::move(labels), 0.5);
}

std::shared_ptr<LieAlgebra<Quaternion>> build_sp(int l) {
  if (l < 1) throw ConstructionError("sp(l) needs l >= 1");
  const auto sz = static_cast<std::size_t>(l);
  std::vector<Matrix<Quaternion>> basis;
  std::vector<std::string> labels;
  auto add = [&](BasisKind k, int i, int j) {
    basis.push_back(pattern_matrix<Quaternion>(sz, k, i, j));
    labels.push_back(index_label(k, i, j));
  };
  for (int i = 1; i <= l; ++i)
    for (BasisKind k : {BasisKind::iG, BasisKind::jG, BasisKind::kG}) add(k, i, i);
  for (BasisKind k : {BasisKind::E, BasisKind::iF, BasisKind::jF, BasisKind::kF})
    for (int i = 1; i <= l; ++i)
      for (int j = i + 1; j <= l; ++j) add(k, i, j);
  return std::make_shared<LieAlgebra<Quaternion>>(Family::SP, l, sz, std::move(basis), std::move(labels), 0.5);
}

std::shared_ptr<LieAlgebra<Complex>> build_u(int l, bool special) {
  if (l < 1 || (special && l < 2)) throw ConstructionError(std::string(special ? "su(n) needs n >= 2" : "u(l) needs l >= 1"));
  const auto sz = static_cast<std::size_t>(l);
  std::vector<Matrix<Complex>> basis;
  std::vector<std::string> labels;
  const Complex iu(0.0, 1.0);
  if (!special) {
    for (std::size_t k = 0; k < sz; ++k) {
      Matrix<Complex> m(sz, sz);
      m(k, k) = iu;
      basis.push_back(std::move(m));
      labels.push_back("iD" + std::to_string(k + 1));
    }
  } else {
    for (std::size_t k = 1; k < sz; ++k) {
      Matrix<Complex> m(sz, sz);
      const double norm = std::sqrt(static_cast<double>(k * (k + 1)));
      for (std::size_t s = 0; s < k; ++s) m(s, s) = iu / norm;
      m(k, k) = -static_cast<double>(k) * iu / norm;
      basis.push_back(std::move(m));
      labels.push_back("H" + std::to_string(k));
    }
  }
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = i + 1; j < sz; ++j) {
      Matrix<Complex> m(sz, sz);
      m(i, j) = 1.0 / kSqrt2;
      m(j, i) = -1.0 / kSqrt2;
      basis.push_back(std::move(m));
      labels.push_back("A" + std::to_string(i + 1) + "," + std::to_string(j + 1));
    }
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = i + 1; j < sz; ++j) {
      Matrix<Complex> m(sz, sz);
      m(i, j) = iu / kSqrt2;
      m(j, i) = iu / kSqrt2;
      basis.push_back(std::move(m));
      labels.push_back("B" + std::to_string(i + 1) + "," + std::to_string(j + 1));
    }
  return std::make_shared<LieAlgebra<Complex>>(special ? Family::SU : Family::U, l, sz, std::move(basis),
                                               std::move(labels), 1.0);
}

template <class T, class Builder>
AlgebraPtr<T> cached(std::map<int, AlgebraPtr<T>>& cache, std::mutex& mu, int key, Builder build) {
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto alg = build();
  check_orthonormal(*alg);
  cache.emplace(key, alg);
  return alg;
}

}  // namespace

template <class T>
LieAlgebra<T>::LieAlgebra(Family family, int rank, std::size_t matrix_size, std::vector<Matrix<T>> basis,
                          std::vector<std::string> labels, double inner_scale)
    : family_(family),
      rank_(rank),
      size_(matrix_size),
      basis_(std::move(basis)),
      labels_(std::move(labels)),
      scale_(inner_scale) {
  if (labels_.size() != basis_.size()) throw ConstructionError("basis and label counts differ");
  for (const auto& b : basis_)
    if (b.rows() != size_ || b.cols() != size_) throw ConstructionError("basis matrix of the wrong size");
}

template <class T>
std::string LieAlgebra<T>::name() const {
  return to_string(family_) + "(" + std::to_string(rank_) + ")";
}

template <class T>
std::vector<double> LieAlgebra<T>::coordinates(const Matrix<T>& m) const {
  std::vector<double> c(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) c[k] = inner(m, basis_[k]);
  return c;
}

template <class T>
Matrix<T> LieAlgebra<T>::assemble(std::span<const double> coords) const {
  if (coords.size() != basis_.size()) {
    throw ShapeError(name() + " expects " + std::to_string(basis_.size()) + " coordinates, got " +
                     std::to_string(coords.size()));
  }
  Matrix<T> m(size_, size_);
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (coords[k] == 0.0) continue;
    auto dst = m.entries();
    auto src = basis_[k].entries();
    for (std::size_t n = 0; n < dst.size(); ++n) dst[n] += src[n] * coords[k];
  }
  return m;
}

template <class T>
bool LieAlgebra<T>::contains(const Matrix<T>& m, double tol) const {
  if (m.rows() != size_ || m.cols() != size_) return false;
  if (!is_skew(m, tol)) return false;
  if (family_ == Family::SU && ScalarTraits<T>::abs(trace(m)) > tol * static_cast<double>(size_)) return false;
  return true;
}

template <class T>
AlgebraElement<T> AlgebraElement<T>::from_matrix(AlgebraPtr<T> algebra, Matrix<T> m) {
  const double scale = std::max(1.0, max_abs(m));
  if (!algebra->contains(m, tol::kStructural * scale)) {
    throw PreconditionError("matrix is not an element of " + algebra->name());
  }
  std::vector<double> c = algebra->coordinates(m);
  const double residual = max_abs_diff(algebra->assemble(c), m);
  if (residual > 1e-10 * scale) {
    throw PreconditionError("matrix does not expand in the basis of " + algebra->name() + " (residual " +
                            std::to_string(residual) + ")");
  }
  return AlgebraElement(std::move(algebra), std::move(c), std::move(m));
}

template <class T>
AlgebraElement<T> AlgebraElement<T>::from_coords(AlgebraPtr<T> algebra, std::vector<double> coords) {
  Matrix<T> m = algebra->assemble(coords);
  return AlgebraElement(std::move(algebra), std::move(coords), std::move(m));
}

template <class T>
AlgebraElement<T> AlgebraElement<T>::zero(AlgebraPtr<T> algebra) {
  std::vector<double> c(algebra->dimension(), 0.0);
  return from_coords(std::move(algebra), std::move(c));
}

template <class T>
AlgebraElement<T>& AlgebraElement<T>::operator+=(const AlgebraElement& o) {
  if (!algebra_->same_as(*o.algebra_)) throw AlgebraMismatch(algebra_->name() + " vs " + o.algebra_->name());
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] += o.coords_[k];
  matrix_ += o.matrix_;
  return *this;
}

template <class T>
AlgebraElement<T>& AlgebraElement<T>::operator-=(const AlgebraElement& o) {
  if (!algebra_->same_as(*o.algebra_)) throw AlgebraMismatch(algebra_->name() + " vs " + o.algebra_->name());
  for (std::size_t k = 0; k < coords_.size(); ++k) coords_[k] -= o.coords_[k];
  matrix_ -= o.matrix_;
  return *this;
}

template <class T>
AlgebraElement<T>& AlgebraElement<T>::operator*=(double s) {
  for (auto& c : coords_) c *= s;
  for (auto& v : matrix_.entries()) v = v * s;
  return *this;
}

template <class T>
Matrix<T> pattern_matrix(std::size_t n, BasisKind kind, int i, int j) {
  const int size = static_cast<int>(n);
  if (i < 1 || i > size) throw ConstructionError("index " + std::to_string(i) + " out of range 1.." + std::to_string(size));
  Matrix<T> m(n, n);
  const auto a = static_cast<std::size_t>(i - 1);
  if (is_g_kind(kind)) {
    m(a, a) = unit_for<T>(kind) * kSqrt2;
    return m;
  }
  if (j < 1 || j > size || j == i) {
    throw ConstructionError("second index " + std::to_string(j) + " invalid for " + kind_name(kind) + " in size " +
                            std::to_string(size));
  }
  const auto b = static_cast<std::size_t>(j - 1);
  switch (kind) {
    case BasisKind::E:
    case BasisKind::F_skew:
      m(a, b) = T(1);
      m(b, a) = T(-1);
      break;
    default:
      m(a, b) = unit_for<T>(kind);
      m(b, a) = unit_for<T>(kind);
      break;
  }
  return m;
}

template <class T>
AlgebraElement<T> basis_element(const AlgebraPtr<T>& algebra, BasisKind kind, int i, int j) {
  const Family f = algebra->family();
  const bool ok = (f == Family::SO && kind == BasisKind::F_skew) ||
                  (f == Family::SP && kind != BasisKind::F_skew && kind != BasisKind::F_sym);
  if (!ok) {
    throw ConstructionError(std::string("basis kind ") + kind_name(kind) + " is not available in " + algebra->name());
  }
  return AlgebraElement<T>::from_matrix(algebra, pattern_matrix<T>(algebra->matrix_size(), kind, i, j));
}

template <class T>
AlgebraElement<T> bracket(const AlgebraElement<T>& a, const AlgebraElement<T>& b) {
  if (!a.algebra().same_as(b.algebra())) throw AlgebraMismatch(a.algebra().name() + " vs " + b.algebra().name());
  Matrix<T> m = bracket(a.matrix(), b.matrix());
  std::vector<double> c = a.algebra().coordinates(m);
  return AlgebraElement<T>::from_coords(a.algebra_ptr(), std::move(c));
}

template <class T>
double invariant_inner(const AlgebraElement<T>& a, const AlgebraElement<T>& b) {
  if (!a.algebra().same_as(b.algebra())) throw AlgebraMismatch(a.algebra().name() + " vs " + b.algebra().name());
  return a.algebra().inner(a.matrix(), b.matrix());
}

template <class T>
AlgebraElement<T> adjoint_action(const Matrix<T>& q, const AlgebraElement<T>& x) {
  const std::size_t n = x.algebra().matrix_size();
  if (q.rows() != n || q.cols() != n) throw ShapeError("group element has the wrong size for " + x.algebra().name());
  if (unitarity_defect(q) > tol::kGroupMembership) {
    throw PreconditionError("matrix is not in the group of " + x.algebra().name());
  }
  if constexpr (std::is_same_v<T, double>) {
    if (determinant(q) < 0.0) throw PreconditionError("orthogonal matrix with determinant -1 is not in SO(n)");
  }
  Matrix<T> m = q * x.matrix() * adjoint(q);
  // restore exact skewness lost to rounding before re-expansion
  Matrix<T> sym = 0.5 * (m - adjoint(m));
  return AlgebraElement<T>::from_matrix(x.algebra_ptr(), std::move(sym));
}

AlgebraPtr<double> so_algebra(int n) {
  static std::map<int, AlgebraPtr<double>> cache;
  static std::mutex mu;
  return cached<double>(cache, mu, n, [n] { return build_so(n); });
}

AlgebraPtr<Quaternion> sp_algebra(int l) {
  static std::map<int, AlgebraPtr<Quaternion>> cache;
  static std::mutex mu;
  return cached<Quaternion>(cache, mu, l, [l] { return build_sp(l); });
}

AlgebraPtr<Complex> u_algebra(int l) {
  static std::map<int, AlgebraPtr<Complex>> cache;
  static std::mutex mu;
  return cached<Complex>(cache, mu, l, [l] { return build_u(l, false); });
}

AlgebraPtr<Complex> su_algebra(int n) {
  static std::map<int, AlgebraPtr<Complex>> cache;
  static std::mutex mu;
  return cached<Complex>(cache, mu, n, [n] { return build_u(n, true); });
}

#define ORBITFORGE_INSTANTIATE(T)                                                                   \
  template class LieAlgebra<T>;                                                                     \
  template class AlgebraElement<T>;                                                                 \
  template Matrix<T> pattern_matrix<T>(std::size_t, BasisKind, int, int);                           \
  template AlgebraElement<T> basis_element<T>(const AlgebraPtr<T>&, BasisKind, int, int);           \
  template AlgebraElement<T> bracket<T>(const AlgebraElement<T>&, const AlgebraElement<T>&);        \
  template double invariant_inner<T>(const AlgebraElement<T>&, const AlgebraElement<T>&);           \
  template AlgebraElement<T> adjoint_action<T>(const Matrix<T>&, const AlgebraElement<T>&);

ORBITFORGE_INSTANTIATE(double)
ORBITFORGE_INSTANTIATE(Complex)
ORBITFORGE_INSTANTIATE(Quaternion)

#undef ORBITFORGE_INSTANTIATE

}  // namespace orbitforge
