#include "orbitforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace orbitforge {
namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

Eigen::MatrixXcd to_eigen(const Matrix<Complex>& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

// Evaluates once up front: lazy expressions (solves, products) would otherwise be
// recomputed per entry.
template <class Derived>
auto from_eigen(const Eigen::EigenBase<Derived>& expr) {
  using S = typename Derived::Scalar;
  const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> e = expr.derived();
  Matrix<S> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

void require_square(std::size_t rows, std::size_t cols, const char* what) {
  if (rows != cols) throw ShapeError(std::string(what) + " needs a square matrix");
}

// Double-double helpers (error-free transformations).
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DD dd_mul(DD a, double b) {
  const double p = a.hi * b;
  const double e = std::fma(a.hi, b, -p);
  return two_sum(p, e + a.lo * b);
}

DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

}  // namespace

PolyCoeffs<Complex> expand_roots(const std::vector<Complex>& roots) {
  // coefficients in descending powers, real and imaginary parts tracked separately
  std::vector<DD> re{DD{1.0, 0.0}};
  std::vector<DD> im{DD{}};
  for (const Complex& r : roots) {
    std::vector<DD> nre(re.size() + 1), nim(im.size() + 1);
    for (std::size_t k = 0; k < re.size(); ++k) {
      nre[k] = dd_add(nre[k], re[k]);
      nim[k] = dd_add(nim[k], im[k]);
      // (re + i im) * (-r)
      const DD pr = dd_add(dd_mul(re[k], -r.real()), dd_mul(im[k], r.imag()));
      const DD pi = dd_add(dd_mul(re[k], -r.imag()), dd_neg(dd_mul(im[k], r.real())));
      nre[k + 1] = dd_add(nre[k + 1], pr);
      nim[k + 1] = dd_add(nim[k + 1], pi);
    }
    re = std::move(nre);
    im = std::move(nim);
  }
  std::vector<Complex> c(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) c[k] = {re[k].hi + re[k].lo, im[k].hi + im[k].lo};
  c[0] = 1.0;
  return PolyCoeffs<Complex>(std::move(c));
}

std::vector<Complex> eigenvalues(const Matrix<Complex>& m) {
  require_square(m.rows(), m.cols(), "eigenvalues");
  if (m.empty()) return {};
  const Eigen::MatrixXcd e = to_eigen(m);
  std::vector<Complex> out;
  if (is_skew(m, 1e-13)) {
    // M = -i H with H = iM Hermitian.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Complex(0, 1) * e, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.emplace_back(0.0, -es.eigenvalues()(k));
  } else if ((e - e.adjoint()).cwiseAbs().maxCoeff() <= 1e-13) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.emplace_back(es.eigenvalues()(k), 0.0);
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(e, false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
  }
  return out;
}

std::vector<Complex> eigenvalues(const Matrix<double>& m) {
  require_square(m.rows(), m.cols(), "eigenvalues");
  if (m.empty()) return {};
  if (is_skew(m, 1e-13) || is_symmetric(m, 1e-13)) return eigenvalues(promote<Complex>(m));
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
  std::vector<Complex> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) out.push_back(es.eigenvalues()(k));
  return out;
}

PolyCoeffs<Complex> charpoly(const Matrix<Complex>& m) {
  require_square(m.rows(), m.cols(), "charpoly");
  return expand_roots(eigenvalues(m));
}

PolyCoeffs<double> charpoly(const Matrix<double>& m) {
  require_square(m.rows(), m.cols(), "charpoly");
  const PolyCoeffs<Complex> c = expand_roots(eigenvalues(m));
  std::vector<double> re(c.coeffs.size());
  std::transform(c.coeffs.begin(), c.coeffs.end(), re.begin(), [](const Complex& v) { return v.real(); });
  return PolyCoeffs<double>(std::move(re));
}

PolyCoeffs<Complex> charpoly(const Matrix<Quaternion>&) {
  throw UnsupportedScalarError("charpoly is undefined for quaternionic matrices; apply embed_dpi first");
}

PolyCoeffs<Rational> charpoly(const Matrix<Rational>& a) {
  require_square(a.rows(), a.cols(), "charpoly");
  const std::size_t n = a.rows();
  std::vector<Rational> coeffs(n + 1);
  coeffs[0] = 1;
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
  Matrix<Rational> mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<Rational> next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += coeffs[k - 1];
    mk = std::move(next);
    const Matrix<Rational> am = a * mk;
    coeffs[k] = -trace(am) / Rational(static_cast<long long>(k));
  }
  return PolyCoeffs<Rational>(std::move(coeffs));
}

double determinant(const Matrix<double>& m) {
  require_square(m.rows(), m.cols(), "determinant");
  return to_eigen(m).determinant();
}

Matrix<double> cayley_retract(const Matrix<double>& u) {
  require_square(u.rows(), u.cols(), "cayley_retract");
  const auto n = static_cast<Eigen::Index>(u.rows());
  const Eigen::MatrixXd half = 0.5 * to_eigen(u);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(id - half);
  const double rc = lu.rcond();
  if (!std::isfinite(rc) || rc < 1e-13) throw RetractionFailure("I - U/2 is singular (rcond " + std::to_string(rc) + ")");
  return from_eigen(lu.solve(id + half));
}

Matrix<Complex> cayley_retract(const Matrix<Complex>& u) {
  require_square(u.rows(), u.cols(), "cayley_retract");
  const auto n = static_cast<Eigen::Index>(u.rows());
  const Eigen::MatrixXcd half = 0.5 * to_eigen(u);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(id - half);
  const double rc = lu.rcond();
  if (!std::isfinite(rc) || rc < 1e-13) throw RetractionFailure("I - U/2 is singular (rcond " + std::to_string(rc) + ")");
  return from_eigen(lu.solve(id + half));
}

Matrix<Quaternion> cayley_retract(const Matrix<Quaternion>& u) {
  require_square(u.rows(), u.cols(), "cayley_retract");
  return from_complex_block(cayley_retract(to_complex_block(u)));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both words
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix<double> haar_orthogonal(int n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("haar_orthogonal needs n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k)
    if (r(k, k) < 0) q.col(k) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return from_eigen(q);
}

Matrix<Quaternion> haar_symplectic(int l, std::uint64_t seed) {
  if (l < 1) throw PreconditionError("haar_symplectic needs l >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<std::size_t>(l);
  Matrix<Quaternion> q(n, n);
  for (auto& v : q.entries()) v = Quaternion(normal(rng), normal(rng), normal(rng), normal(rng));
  // Gram-Schmidt on columns with quaternionic scalars acting from the right:
  // v <- v - u (u* v), then normalize. Gaussian columns make the result Haar.
  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        Quaternion proj;
        for (std::size_t s = 0; s < n; ++s) proj += conj(q(s, p)) * q(s, c);
        for (std::size_t s = 0; s < n; ++s) q(s, c) -= q(s, p) * proj;
      }
    }
    double norm = 0.0;
    for (std::size_t s = 0; s < n; ++s) norm += norm2(q(s, c));
    norm = std::sqrt(norm);
    for (std::size_t s = 0; s < n; ++s) q(s, c) *= 1.0 / norm;
  }
  return q;
}

Matrix<Complex> to_complex_block(const Matrix<Quaternion>& q) {
  const std::size_t r = q.rows();
  const std::size_t c = q.cols();
  Matrix<Complex> out(2 * r, 2 * c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const Complex a = symplectic_part_a(q(i, j));
      const Complex b = symplectic_part_b(q(i, j));
      out(i, j) = a;
      out(i, c + j) = -std::conj(b);
      out(r + i, j) = b;
      out(r + i, c + j) = std::conj(a);
    }
  }
  return out;
}

Matrix<Quaternion> from_complex_block(const Matrix<Complex>& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) throw ShapeError("complex block form needs even dimensions");
  const std::size_t r = m.rows() / 2;
  const std::size_t c = m.cols() / 2;
  Matrix<Quaternion> out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = from_symplectic_parts(m(i, j), m(r + i, j));
  return out;
}

SkewCanonicalForm skew_canonical_form(const Matrix<double>& m) {
  if (!is_skew(m, 1e-12) || m.rows() % 2 == 0) {
    throw PreconditionError("skew_canonical_form needs an odd-sized real skew-symmetric matrix");
  }
  const auto n = static_cast<Eigen::Index>(m.rows());
  const Eigen::MatrixXd real = to_eigen(m);
  // H = iM is Hermitian; H v = t v  <=>  M v = -i t v, and with v = a + ib,
  // M a = t b, M b = -t a, so (sqrt2 a, sqrt2 b) spans a [[0,-t],[t,0]] block.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Complex(0, 1) * real.cast<Complex>());
  const double scale = std::max(1.0, real.cwiseAbs().maxCoeff());
  const double zero_cut = 1e-12 * scale;

  std::vector<double> rates;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const double t = es.eigenvalues()(k);
    if (t <= zero_cut) break;
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    rates.push_back(t);
    basis.push_back(std::sqrt(2.0) * v.real());
    basis.push_back(std::sqrt(2.0) * v.imag());
  }
  // Complete with an orthonormal basis of the kernel.
  auto orthonormalize = [&](Eigen::VectorXd v) -> Eigen::VectorXd {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    return v;
  };
  for (std::size_t p = 0; p < basis.size(); ++p) {
    Eigen::VectorXd v = basis[p];
    for (std::size_t q = 0; q < p; ++q) v -= basis[q].dot(v) * basis[q];
    basis[p] = v.normalized();
  }
  for (Eigen::Index e = 0; e < n && static_cast<Eigen::Index>(basis.size()) < n; ++e) {
    Eigen::VectorXd v = orthonormalize(Eigen::VectorXd::Unit(n, e));
    if (v.norm() > 1e-6) basis.push_back(v.normalized());
  }
  while (rates.size() < static_cast<std::size_t>(n / 2)) rates.push_back(0.0);

  Eigen::MatrixXd q(n, n);
  for (Eigen::Index c = 0; c < n; ++c) q.col(c) = basis[static_cast<std::size_t>(c)];
  // the last column spans part of the kernel, so flipping it keeps the block form
  if (q.determinant() < 0) q.col(n - 1) *= -1.0;
  return SkewCanonicalForm{std::move(rates), from_eigen(q)};
}

std::array<double, 3> skew_spectrum_so7(const Matrix<double>& m) {
  if (m.rows() != 7 || m.cols() != 7 || !is_skew(m, 1e-12)) {
    throw PreconditionError("skew_spectrum_so7 needs a 7x7 real skew-symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Complex(0, 1) * to_eigen(m).cast<Complex>(),
                                                     Eigen::EigenvaluesOnly);
  // eigenvalues ascending: -z1, -z2, -z3, 0, z3, z2, z1
  const auto& ev = es.eigenvalues();
  return {std::max(0.0, ev(6)), std::max(0.0, ev(5)), std::max(0.0, ev(4))};
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  std::ostringstream s;
  s << "(" << q.w << (q.x < 0 ? "" : "+") << q.x << "i" << (q.y < 0 ? "" : "+") << q.y << "j"
    << (q.z < 0 ? "" : "+") << q.z << "k)";
  return os << s.str();
}

}  // namespace orbitforge
