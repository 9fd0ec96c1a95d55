#include "orbitforge/embeddings.hpp"

#include "orbitforge/linalg.hpp"

namespace orbitforge {

UnitaryPair to_pair(const AlgebraElement<Complex>& m) {
  if (m.algebra().family() != Family::U && m.algebra().family() != Family::SU) {
    throw PreconditionError("to_pair expects an element of u(l)");
  }
  const std::size_t n = m.algebra().matrix_size();
  UnitaryPair p{Matrix<double>(n, n), Matrix<double>(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      p.a(i, j) = m.matrix()(i, j).real();
      p.b(i, j) = m.matrix()(i, j).imag();
    }
  return p;
}

AlgebraElement<Complex> from_pair(const UnitaryPair& p) {
  if (!p.a.square() || p.a.rows() != p.b.rows() || p.a.cols() != p.b.cols()) {
    throw ShapeError("u(l) pair needs two square matrices of equal size");
  }
  if (!is_skew(p.a) || !is_symmetric(p.b)) throw PreconditionError("u(l) pair needs A skew and B symmetric");
  const std::size_t n = p.a.rows();
  Matrix<Complex> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(p.a(i, j), p.b(i, j));
  return AlgebraElement<Complex>::from_matrix(u_algebra(static_cast<int>(n)), std::move(m));
}

namespace {

Matrix<double> tau_block(const AlgebraElement<Complex>& m, std::size_t size) {
  if (m.algebra().family() != Family::U) throw PreconditionError("embedding expects an element of u(l)");
  const UnitaryPair p = to_pair(m);
  if (!is_skew(p.a) || !is_symmetric(p.b)) throw PreconditionError("malformed u(l) element");
  const std::size_t l = p.a.rows();
  Matrix<double> out(size, size);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      out(i, j) = p.a(i, j);
      out(i, l + j) = p.b(i, j);
      out(l + i, j) = -p.b(i, j);
      out(l + i, l + j) = p.a(i, j);
    }
  return out;
}

}  // namespace

AlgebraElement<double> embed_tau(const AlgebraElement<Complex>& m) {
  const std::size_t l = m.algebra().matrix_size();
  return AlgebraElement<double>::from_matrix(so_algebra(static_cast<int>(2 * l)), tau_block(m, 2 * l));
}

AlgebraElement<double> embed_tau_prime(const AlgebraElement<Complex>& m) {
  const std::size_t l = m.algebra().matrix_size();
  return AlgebraElement<double>::from_matrix(so_algebra(static_cast<int>(2 * l + 1)), tau_block(m, 2 * l + 1));
}

std::size_t sigma_index_q1(int m, int l, std::size_t r) {
  const auto mm = static_cast<std::size_t>(m);
  const auto k = static_cast<std::size_t>(l - m);
  if (r < mm) return r;
  if (r < 2 * mm) return r + k;
  return 2 * static_cast<std::size_t>(l);
}

std::size_t sigma_index_q2(int m, int l, std::size_t r) {
  const auto mm = static_cast<std::size_t>(m);
  const auto k = static_cast<std::size_t>(l - m);
  if (r < k) return mm + r;
  return 2 * mm + r;
}

AlgebraElement<double> embed_sigma(int m, int l, const AlgebraElement<double>& q1, const AlgebraElement<double>& q2) {
  if (m < 1 || m >= l) throw PreconditionError("embed_sigma needs 1 <= m < l");
  const int k = l - m;
  if (q1.algebra().matrix_size() != static_cast<std::size_t>(2 * m + 1)) {
    throw PreconditionError("embed_sigma: first argument must lie in so(" + std::to_string(2 * m + 1) + ")");
  }
  if (q2.algebra().matrix_size() != static_cast<std::size_t>(2 * k)) {
    throw PreconditionError("embed_sigma: second argument must lie in so(" + std::to_string(2 * k) + ")");
  }
  const auto n = static_cast<std::size_t>(2 * l + 1);
  Matrix<double> out(n, n);
  const auto& a = q1.matrix();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(sigma_index_q1(m, l, i), sigma_index_q1(m, l, j)) = a(i, j);
  const auto& b = q2.matrix();
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(sigma_index_q2(m, l, i), sigma_index_q2(m, l, j)) = b(i, j);
  return AlgebraElement<double>::from_matrix(so_algebra(2 * l + 1), std::move(out));
}

Matrix<Complex> embed_dpi(const AlgebraElement<Quaternion>& w) {
  if (w.algebra().family() != Family::SP) throw PreconditionError("embed_dpi expects an element of sp(l)");
  return to_complex_block(w.matrix());
}

}  // namespace orbitforge
