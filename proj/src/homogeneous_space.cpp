#include "orbitforge/homogeneous_space.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "orbitforge/embeddings.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/tolerances.hpp"

namespace orbitforge {

std::string to_string(SpaceFamily s) {
  return s == SpaceFamily::SoOverU ? "SO(2l+1)/U(l)" : "Sp(l)/U(1)Sp(l-1)";
}

MetricParams::MetricParams(double x1, double x2) : x1_(x1), x2_(x2) {
  if (!(x1 > 0.0) || !(x2 > 0.0) || !std::isfinite(x1) || !std::isfinite(x2)) {
    throw DomainError("metric weights must be positive and finite");
  }
}

namespace {

// Real components of a scalar, for flattening matrices into linear systems.
inline void push_components(std::vector<double>& out, double v) { out.push_back(v); }
inline void push_components(std::vector<double>& out, const Complex& v) {
  out.push_back(v.real());
  out.push_back(v.imag());
}
inline void push_components(std::vector<double>& out, const Quaternion& v) {
  out.insert(out.end(), {v.w, v.x, v.y, v.z});
}

template <class T>
std::vector<double> flatten(const Matrix<T>& m, double weight) {
  std::vector<double> out;
  for (const T& v : m.entries()) push_components(out, v);
  for (double& v : out) v *= weight;
  return out;
}

}  // namespace

template <class T>
ReductiveDecomposition<T>::ReductiveDecomposition(SpaceFamily space, int l, AlgebraPtr<T> algebra,
                                                  std::vector<AlgebraElement<T>> h, std::vector<AlgebraElement<T>> p1,
                                                  std::vector<AlgebraElement<T>> p2)
    : space_(space), l_(l), algebra_(std::move(algebra)), h_(std::move(h)), p1_(std::move(p1)), p2_(std::move(p2)) {
  if (h_.size() + p1_.size() + p2_.size() != algebra_->dimension()) {
    throw ConstructionError("block dimensions do not add up to dim " + algebra_->name());
  }
  std::vector<const AlgebraElement<T>*> all;
  for (const auto* block : {&h_, &p1_, &p2_})
    for (const auto& e : *block) all.push_back(&e);
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a; b < all.size(); ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(invariant_inner(*all[a], *all[b]) - expected) > tol::kStructural) {
        throw ConstructionError("decomposition bases are not orthonormal");
      }
    }
  h_sparse_ = sparsify(h_);
  p1_sparse_ = sparsify(p1_);
  p2_sparse_ = sparsify(p2_);
}

template <class T>
typename ReductiveDecomposition<T>::SparseBasis ReductiveDecomposition<T>::sparsify(
    const std::vector<AlgebraElement<T>>& basis) {
  SparseBasis out;
  for (const auto& e : basis) {
    std::vector<SparseEntry> entries;
    auto flat = e.matrix().entries();
    for (std::size_t n = 0; n < flat.size(); ++n)
      if (ScalarTraits<T>::abs(flat[n]) != 0.0) entries.push_back({n, flat[n]});
    out.push_back(std::move(entries));
  }
  return out;
}

template <class T>
std::vector<double> ReductiveDecomposition<T>::coords(const SparseBasis& b, const Matrix<T>& w) const {
  const double scale = algebra_->inner_scale();
  auto flat = w.entries();
  std::vector<double> c(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) {
    double s = 0.0;
    for (const auto& e : b[k]) s += ScalarTraits<T>::dot(flat[e.index], e.value);
    c[k] = scale * s;
  }
  return c;
}

template <class T>
double ReductiveDecomposition<T>::block_norm2(const SparseBasis& b, const Matrix<T>& w) const {
  double s = 0.0;
  for (double c : coords(b, w)) s += c * c;
  return s;
}

template <class T>
Matrix<T> ReductiveDecomposition<T>::assemble(const SparseBasis& b, std::span<const double> c) const {
  const std::size_t n = algebra_->matrix_size();
  Matrix<T> m(n, n);
  auto flat = m.entries();
  for (std::size_t k = 0; k < b.size(); ++k)
    for (const auto& e : b[k]) flat[e.index] += e.value * c[k];
  return m;
}

template <class T>
BlockSplit<T> ReductiveDecomposition<T>::split(const Matrix<T>& w) const {
  return {assemble(p1_sparse_, coords(p1_sparse_, w)), assemble(p2_sparse_, coords(p2_sparse_, w)),
          assemble(h_sparse_, coords(h_sparse_, w))};
}

template <class T>
double ReductiveDecomposition<T>::metric_norm2(const MetricParams& params, const Matrix<T>& w) const {
  return params.x1() * block_norm2(p1_sparse_, w) + params.x2() * block_norm2(p2_sparse_, w);
}

template <class T>
Matrix<T> ReductiveDecomposition<T>::weighted_p(const MetricParams& params, const Matrix<T>& w) const {
  std::vector<double> c1 = coords(p1_sparse_, w);
  std::vector<double> c2 = coords(p2_sparse_, w);
  for (double& v : c1) v *= params.x1();
  for (double& v : c2) v *= params.x2();
  return assemble(p1_sparse_, c1) + assemble(p2_sparse_, c2);
}

ReductiveDecomposition<double> build_so_decomposition(int l) {
  if (l < 3) throw ConstructionError("SO(2l+1)/U(l) is supported for l >= 3");
  const int n = 2 * l + 1;
  auto alg = so_algebra(n);
  const auto sz = static_cast<std::size_t>(n);
  const auto ll = static_cast<std::size_t>(l);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  std::vector<AlgebraElement<double>> h;
  for (const auto& b : u_algebra(l)->basis()) {
    h.push_back(embed_tau_prime(AlgebraElement<Complex>::from_matrix(u_algebra(l), b)));
  }

  std::vector<AlgebraElement<double>> p2;
  for (int type = 0; type < 2; ++type)
    for (std::size_t i = 0; i < ll; ++i)
      for (std::size_t j = i + 1; j < ll; ++j) {
        Matrix<double> m(sz, sz);
        if (type == 0) {  // [[A, 0], [0, -A]]
          m(i, j) = inv_sqrt2;
          m(j, i) = -inv_sqrt2;
          m(ll + i, ll + j) = -inv_sqrt2;
          m(ll + j, ll + i) = inv_sqrt2;
        } else {  // [[0, B], [B, 0]]
          m(i, ll + j) = inv_sqrt2;
          m(j, ll + i) = -inv_sqrt2;
          m(ll + i, j) = inv_sqrt2;
          m(ll + j, i) = -inv_sqrt2;
        }
        p2.push_back(AlgebraElement<double>::from_matrix(alg, std::move(m)));
      }

  std::vector<AlgebraElement<double>> p1;
  for (int i = 1; i < n; ++i) p1.push_back(basis_element(alg, BasisKind::F_skew, i, n));

  return ReductiveDecomposition<double>(SpaceFamily::SoOverU, l, alg, std::move(h), std::move(p1), std::move(p2));
}

ReductiveDecomposition<Quaternion> build_sp_decomposition(int l) {
  if (l < 2) throw ConstructionError("Sp(l)/U(1)Sp(l-1) is supported for l >= 2");
  auto alg = sp_algebra(l);
  std::vector<AlgebraElement<Quaternion>> h, p1, p2;
  h.push_back(basis_element(alg, BasisKind::iG, 1));
  for (int i = 2; i <= l; ++i)
    for (BasisKind k : {BasisKind::iG, BasisKind::jG, BasisKind::kG}) h.push_back(basis_element(alg, k, i));
  for (BasisKind k : {BasisKind::E, BasisKind::iF, BasisKind::jF, BasisKind::kF})
    for (int i = 2; i <= l; ++i)
      for (int j = i + 1; j <= l; ++j) h.push_back(basis_element(alg, k, i, j));

  p2.push_back(basis_element(alg, BasisKind::jG, 1));
  p2.push_back(basis_element(alg, BasisKind::kG, 1));

  for (BasisKind k : {BasisKind::E, BasisKind::iF, BasisKind::jF, BasisKind::kF})
    for (int j = 2; j <= l; ++j) p1.push_back(basis_element(alg, k, 1, j));

  return ReductiveDecomposition<Quaternion>(SpaceFamily::SpOverUSp, l, alg, std::move(h), std::move(p1),
                                            std::move(p2));
}

template <class T>
double metric_inner(const MetricParams& params, const ReductiveDecomposition<T>& decomp, const AlgebraElement<T>& x,
                    const AlgebraElement<T>& y) {
  for (const auto* e : {&x, &y}) {
    if (!e->algebra().same_as(*decomp.algebra())) throw AlgebraMismatch("element is not in " + decomp.algebra()->name());
    double hn = 0.0;
    for (double c : decomp.h_coords(e->matrix())) hn += c * c;
    if (std::sqrt(hn) > 1e-10 * std::max(1.0, e->algebra().norm(e->matrix()))) {
      throw PreconditionError("metric_inner arguments must lie in p = p1 + p2");
    }
  }
  double s = 0.0;
  const auto x1 = decomp.p1_coords(x.matrix());
  const auto y1 = decomp.p1_coords(y.matrix());
  for (std::size_t k = 0; k < x1.size(); ++k) s += params.x1() * x1[k] * y1[k];
  const auto x2 = decomp.p2_coords(x.matrix());
  const auto y2 = decomp.p2_coords(y.matrix());
  for (std::size_t k = 0; k < x2.size(); ++k) s += params.x2() * x2[k] * y2[k];
  return s;
}

template <class T>
GeodesicCheckResult geodesic_check(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                   const AlgebraElement<T>& w, double tolerance) {
  if (params.normal()) {
    throw NormalMetricError("x1 == x2 is the normal (bi-invariant) case; the mixed condition divides by x2 - x1");
  }
  const LieAlgebra<T>& alg = *decomp.algebra();
  const BlockSplit<T> s = decomp.split(w.matrix());
  GeodesicCheckResult r;
  r.residual_zy = alg.norm(bracket(s.z, s.y));
  const Matrix<T> mix = bracket(s.x, s.y) - (params.x1() / (params.x2() - params.x1())) * bracket(s.x, s.z);
  r.residual_mix = alg.norm(mix);
  r.passes = r.residual_zy < tolerance && r.residual_mix < tolerance;
  return r;
}

template <class T>
GeodesicCompletion<T> solve_geodesic_completion(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                                const Matrix<T>& x, const Matrix<T>& y, double cutoff) {
  const double weight = std::sqrt(decomp.algebra()->inner_scale());
  const auto& hb = decomp.h_basis();
  // [Z, Y] = 0  and  [X, Z] = mu [X, Y]  (equivalent to the mixed condition for x1 != x2)
  std::vector<std::vector<double>> columns;
  for (const auto& h : hb) {
    std::vector<double> col = flatten(bracket(h.matrix(), y), weight);
    const std::vector<double> lower = flatten(bracket(x, h.matrix()), weight);
    col.insert(col.end(), lower.begin(), lower.end());
    columns.push_back(std::move(col));
  }
  std::vector<double> rhs = flatten(Matrix<T>(y.rows(), y.cols()), weight);
  const std::vector<double> lower_rhs = flatten(params.mu() * bracket(x, y), weight);
  rhs.insert(rhs.end(), lower_rhs.begin(), lower_rhs.end());

  const auto rows = static_cast<Eigen::Index>(rhs.size());
  const auto cols = static_cast<Eigen::Index>(hb.size());
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) a(r, c) = columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), rows);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = cutoff * smax;
  Eigen::Index rank = 0;
  while (rank < sv.size() && smax > 0.0 && sv(rank) > threshold) ++rank;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
  for (Eigen::Index k = 0; k < rank; ++k) z += (utb(k) / sv(k)) * svd.matrixV().col(k);

  GeodesicCompletion<T> out;
  out.residual = (a * z - b).norm();
  std::vector<double> zc(z.data(), z.data() + z.size());
  out.particular = decomp.assemble_h(zc);
  for (Eigen::Index k = rank; k < cols; ++k) {
    const Eigen::VectorXd v = svd.matrixV().col(k);
    std::vector<double> vc(v.data(), v.data() + v.size());
    out.nullspace.push_back(decomp.assemble_h(vc));
  }
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  return out;
}

So7Coefficients so7_preset_coefficients(So7Preset preset, double lambda) {
  if (!(lambda > 1.0 && lambda < 2.0)) throw DomainError("so(7) presets need lambda in (1, 2)");
  const double t = 2.0 - lambda;
  const double l2 = lambda * lambda;
  const double l3 = l2 * lambda;
  const double l4 = l3 * lambda;
  switch (preset) {
    case So7Preset::PairA: {
      const double den = t * t + l3 - 1.0;
      return {std::sqrt(l2 * den), std::sqrt((l3 - 1.0) * (1.0 - t * t) / den), std::sqrt(l3 * t * t / den)};
    }
    case So7Preset::PairB: {
      const double den = t * t + l4 * (lambda - 1.0);
      return {std::sqrt(den), std::sqrt(l2 * (lambda - 1.0) * (l4 - t * t) / den), std::sqrt(l3 * t * t / den)};
    }
    case So7Preset::General: break;
  }
  throw PreconditionError("the general preset takes explicit (s1, q, r)");
}

AlgebraElement<double> make_so7_vector(So7Preset preset, const MetricParams& params,
                                       std::optional<So7Coefficients> free) {
  const double lambda = params.lambda();
  if (!(lambda > 1.0 && lambda < 2.0)) throw DomainError("so(7) vectors need x1 < x2 < 2 x1");
  So7Coefficients k;
  if (preset == So7Preset::General) {
    if (!free) throw PreconditionError("the general preset needs (s1, q, r)");
    k = *free;
  } else {
    k = so7_preset_coefficients(preset, lambda);
  }
  auto alg = so_algebra(7);
  auto f = [&](int i, int j) { return basis_element(alg, BasisKind::F_skew, i, j); };
  return k.s1 * f(1, 7) + (lambda * k.q) * f(1, 6) + (lambda * k.r) * f(2, 6) + ((lambda - 2.0) * k.q) * f(3, 4) +
         ((lambda - 2.0) * k.r) * f(3, 5);
}

AlgebraElement<Quaternion> make_sp_candidate(int l, double c, double d, const MetricParams& params) {
  if (l < 2) throw PreconditionError("make_sp_candidate needs l >= 2");
  auto alg = sp_algebra(l);
  return c * basis_element(alg, BasisKind::E, 1, 2) + d * basis_element(alg, BasisKind::jG, 1) -
         (params.mu() * d) * basis_element(alg, BasisKind::jG, 2);
}

AlgebraElement<Quaternion> make_sp_form(SpForm form, int l, const SpFormCoefficients& k, const MetricParams& params) {
  if (l < 2) throw PreconditionError("Sp forms need l >= 2");
  auto alg = sp_algebra(l);
  const int first_free = form == SpForm::W1 ? 2 : 3;
  const auto max_free = static_cast<std::size_t>(l - first_free + 1);
  if (k.alpha_q.size() > max_free) throw PreconditionError("too many alpha_q coefficients for this form");
  if (form == SpForm::W) return make_sp_candidate(l, k.c, k.d, params);

  AlgebraElement<Quaternion> w = AlgebraElement<Quaternion>::zero(alg);
  switch (form) {
    case SpForm::W1:
      w += k.d * basis_element(alg, BasisKind::jG, 1);
      break;
    case SpForm::W2:
      w += k.c * basis_element(alg, BasisKind::E, 1, 2);
      w += k.alpha * (basis_element(alg, BasisKind::iG, 1) + basis_element(alg, BasisKind::iG, 2));
      break;
    case SpForm::W3:
      w += make_sp_candidate(l, k.c, k.d, params);
      break;
    case SpForm::W: break;
  }
  for (std::size_t q = 0; q < k.alpha_q.size(); ++q) {
    w += k.alpha_q[q] * basis_element(alg, BasisKind::iG, first_free + static_cast<int>(q));
  }
  return w;
}

IsotropyNormalForm isotropy_normal_form(const ReductiveDecomposition<Quaternion>& decomp,
                                        const Matrix<Quaternion>& w) {
  const auto l = static_cast<std::size_t>(decomp.l());
  const BlockSplit<Quaternion> s = decomp.split(w);

  // U(1) = exp(t iG1) rotates the (jG1, kG1) plane by twice its angle.
  const Quaternion y0 = s.y(0, 0);
  const double rho = std::hypot(y0.y, y0.z);
  const double theta = rho > 0.0 ? -0.5 * std::atan2(y0.z, y0.y) : 0.0;
  const Quaternion u(std::cos(theta), std::sin(theta), 0.0, 0.0);
  Matrix<Quaternion> a1 = Matrix<Quaternion>::identity(l);
  a1(0, 0) = u;

  // Sp(l-1) acts on the first row of p1 from the right; send it to (|v|, 0, ..., 0).
  std::vector<Quaternion> v(l - 1);
  double vnorm = 0.0;
  for (std::size_t j = 1; j < l; ++j) {
    v[j - 1] = u * s.x(0, j);
    vnorm += norm2(v[j - 1]);
  }
  vnorm = std::sqrt(vnorm);
  Matrix<Quaternion> bstar = Matrix<Quaternion>::identity(l - 1);
  if (vnorm > 0.0) {
    // first column conj(v)/|v|, completed by Gram-Schmidt with right scalars
    std::vector<std::vector<Quaternion>> cols;
    std::vector<Quaternion> c0(l - 1);
    for (std::size_t s2 = 0; s2 < l - 1; ++s2) c0[s2] = conj(v[s2]) * (1.0 / vnorm);
    cols.push_back(c0);
    for (std::size_t e = 0; e < l - 1 && cols.size() < l - 1; ++e) {
      std::vector<Quaternion> c(l - 1);
      c[e] = Quaternion::one();
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& p : cols) {
          Quaternion proj;
          for (std::size_t t = 0; t < l - 1; ++t) proj += conj(p[t]) * c[t];
          for (std::size_t t = 0; t < l - 1; ++t) c[t] -= p[t] * proj;
        }
      double n = 0.0;
      for (const auto& q : c) n += norm2(q);
      n = std::sqrt(n);
      if (n < 1e-8) continue;
      for (auto& q : c) q *= 1.0 / n;
      cols.push_back(std::move(c));
    }
    for (std::size_t cidx = 0; cidx < l - 1; ++cidx)
      for (std::size_t r = 0; r < l - 1; ++r) bstar(r, cidx) = cols[cidx][r];
  }
  Matrix<Quaternion> a2 = Matrix<Quaternion>::identity(l);
  const Matrix<Quaternion> b = adjoint(bstar);
  for (std::size_t r = 0; r + 1 < l; ++r)
    for (std::size_t c = 0; c + 1 < l; ++c) a2(r + 1, c + 1) = b(r, c);

  return IsotropyNormalForm{a2 * a1, vnorm, rho / std::sqrt(2.0)};
}

template <class T>
Matrix<T> isotropy_element(const ReductiveDecomposition<T>& decomp, std::span<const double> h_coords) {
  if (h_coords.size() != decomp.h_basis().size()) throw ShapeError("h coordinate count mismatch");
  return cayley_retract(decomp.assemble_h(h_coords));
}

#define ORBITFORGE_INSTANTIATE(T)                                                                                 \
  template class ReductiveDecomposition<T>;                                                                       \
  template double metric_inner<T>(const MetricParams&, const ReductiveDecomposition<T>&, const AlgebraElement<T>&, \
                                  const AlgebraElement<T>&);                                                      \
  template GeodesicCheckResult geodesic_check<T>(const ReductiveDecomposition<T>&, const MetricParams&,           \
                                                 const AlgebraElement<T>&, double);                               \
  template GeodesicCompletion<T> solve_geodesic_completion<T>(const ReductiveDecomposition<T>&,                   \
                                                              const MetricParams&, const Matrix<T>&,              \
                                                              const Matrix<T>&, double);                          \
  template Matrix<T> isotropy_element<T>(const ReductiveDecomposition<T>&, std::span<const double>);

ORBITFORGE_INSTANTIATE(double)
ORBITFORGE_INSTANTIATE(Quaternion)

#undef ORBITFORGE_INSTANTIATE

}  // namespace orbitforge
