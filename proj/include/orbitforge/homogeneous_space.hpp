#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orbitforge/lie_algebra.hpp"

namespace orbitforge {

enum class SpaceFamily {
  SoOverU,   // SO(2l+1)/U(l), K = SO(2l)
  SpOverUSp  // Sp(l)/U(1).Sp(l-1), K = Sp(1).Sp(l-1)
};

std::string to_string(SpaceFamily s);

/// Weights (x1, x2) of the invariant metric x1 <,>|p1 + x2 <,>|p2.
class MetricParams {
 public:
  MetricParams(double x1, double x2);

  double x1() const { return x1_; }
  double x2() const { return x2_; }
  /// x2 / x1
  double lambda() const { return x2_ / x1_; }
  /// (x2 - x1) / x1
  double mu() const { return (x2_ - x1_) / x1_; }
  bool normal() const { return x1_ == x2_; }

 private:
  double x1_;
  double x2_;
};

/// The three orthogonal pieces of W = X + Y + Z with X in p1, Y in p2, Z in h.
template <class T>
struct BlockSplit {
  Matrix<T> x;
  Matrix<T> y;
  Matrix<T> z;
};

/// Orthonormal bases of h, p1, p2 with g = h + p1 + p2 and k = h + p2.
template <class T>
class ReductiveDecomposition {
 public:
  ReductiveDecomposition(SpaceFamily space, int l, AlgebraPtr<T> algebra, std::vector<AlgebraElement<T>> h,
                         std::vector<AlgebraElement<T>> p1, std::vector<AlgebraElement<T>> p2);

  SpaceFamily space() const { return space_; }
  int l() const { return l_; }
  const AlgebraPtr<T>& algebra() const { return algebra_; }
  const std::vector<AlgebraElement<T>>& h_basis() const { return h_; }
  const std::vector<AlgebraElement<T>>& p1_basis() const { return p1_; }
  const std::vector<AlgebraElement<T>>& p2_basis() const { return p2_; }

  std::vector<double> h_coords(const Matrix<T>& w) const { return coords(h_sparse_, w); }
  std::vector<double> p1_coords(const Matrix<T>& w) const { return coords(p1_sparse_, w); }
  std::vector<double> p2_coords(const Matrix<T>& w) const { return coords(p2_sparse_, w); }

  BlockSplit<T> split(const Matrix<T>& w) const;

  /// x1 |W_p1|^2 + x2 |W_p2|^2; the h-component is ignored.
  double metric_norm2(const MetricParams& params, const Matrix<T>& w) const;
  /// x1 W_p1 + x2 W_p2, the metric dual of W_p.
  Matrix<T> weighted_p(const MetricParams& params, const Matrix<T>& w) const;

  Matrix<T> assemble_h(std::span<const double> c) const { return assemble(h_sparse_, c); }

 private:
  struct SparseEntry {
    std::size_t index;
    T value;
  };
  using SparseBasis = std::vector<std::vector<SparseEntry>>;

  static SparseBasis sparsify(const std::vector<AlgebraElement<T>>& basis);
  std::vector<double> coords(const SparseBasis& b, const Matrix<T>& w) const;
  double block_norm2(const SparseBasis& b, const Matrix<T>& w) const;
  Matrix<T> assemble(const SparseBasis& b, std::span<const double> c) const;

  SpaceFamily space_;
  int l_;
  AlgebraPtr<T> algebra_;
  std::vector<AlgebraElement<T>> h_, p1_, p2_;
  SparseBasis h_sparse_, p1_sparse_, p2_sparse_;
};

/// SO(2l+1)/U(l), l >= 3. h = embed_tau_prime(u(l)); p2 = {[[A, B], [B, -A]] : A, B skew};
/// p1 = span F_{i,2l+1}. The p2 basis is ordered A_12, A_13, ..., then B_12, B_13, ...
ReductiveDecomposition<double> build_so_decomposition(int l);

/// Sp(l)/U(1).Sp(l-1), l >= 2. h = span(iG1) + sp(l-1) in slots 2..l; p2 = span(jG1, kG1);
/// p1 = span(E_1j, iF_1j, jF_1j, kF_1j).
ReductiveDecomposition<Quaternion> build_sp_decomposition(int l);

/// (X, Y) = x1 <X1, Y1> + x2 <X2, Y2>. Throws PreconditionError if either argument has an h-part.
template <class T>
double metric_inner(const MetricParams& params, const ReductiveDecomposition<T>& decomp, const AlgebraElement<T>& x,
                    const AlgebraElement<T>& y);

struct GeodesicCheckResult {
  double residual_zy = 0.0;   // |[Z, Y]|
  double residual_mix = 0.0;  // |[X, Y] - x1/(x2 - x1) [X, Z]|
  bool passes = false;
};

/// Necessary geodesic-vector conditions [Z, Y] = 0 and [X, Y] = x1/(x2 - x1) [X, Z].
/// Throws NormalMetricError when x1 == x2.
template <class T>
GeodesicCheckResult geodesic_check(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                   const AlgebraElement<T>& w, double tolerance = 1e-9);

/// Solution set of the geodesic conditions for Z in h, given X in p1 and Y in p2.
template <class T>
struct GeodesicCompletion {
  Matrix<T> particular;              // minimum-norm least-squares solution
  std::vector<Matrix<T>> nullspace;  // orthonormal (in h-coordinates)
  double residual = 0.0;             // |A z - b| at the particular solution
  std::vector<double> singular_values;

  std::size_t nullity() const { return nullspace.size(); }
  bool consistent(double tol = 1e-9) const { return residual < tol; }
};

template <class T>
GeodesicCompletion<T> solve_geodesic_completion(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                                const Matrix<T>& x, const Matrix<T>& y,
                                                double cutoff = 1e-8);

// ---------------------------------------------------------------------------
// Named vectors.
// ---------------------------------------------------------------------------

enum class So7Preset { PairA, PairB, General };

struct So7Coefficients {
  double s1 = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Closed-form (s1, q, r) of the two presets at metric ratio lambda in (1, 2).
So7Coefficients so7_preset_coefficients(So7Preset preset, double lambda);

/// s1 F17 + lambda q F16 + lambda r F26 + (lambda - 2) q F34 + (lambda - 2) r F35 in so(7).
/// General takes (s1, q, r) from `free`; the presets compute them from lambda.
AlgebraElement<double> make_so7_vector(So7Preset preset, const MetricParams& params,
                                       std::optional<So7Coefficients> free = std::nullopt);

/// c E12 + d jG1 - ((x2 - x1)/x1) d jG2 in sp(l).
AlgebraElement<Quaternion> make_sp_candidate(int l, double c, double d, const MetricParams& params);

enum class SpForm { W1, W2, W3, W };

/// Free parameters of the Sp orbit normal forms. alpha_q lists alpha_2..alpha_l for W1 and
/// alpha_3..alpha_l for W2/W3 (missing trailing entries are zero). W ignores alpha and alpha_q.
struct SpFormCoefficients {
  double c = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  std::vector<double> alpha_q;
};

AlgebraElement<Quaternion> make_sp_form(SpForm form, int l, const SpFormCoefficients& k, const MetricParams& params);

/// a in H = U(1).Sp(l-1) with Ad(a) W_p = c E12 + d jG1, c, d >= 0.
struct IsotropyNormalForm {
  Matrix<Quaternion> conjugator;
  double c = 0.0;
  double d = 0.0;
};

IsotropyNormalForm isotropy_normal_form(const ReductiveDecomposition<Quaternion>& decomp, const Matrix<Quaternion>& w);

/// Group element of H obtained by the Cayley retraction of sum_k coords_k h_k.
template <class T>
Matrix<T> isotropy_element(const ReductiveDecomposition<T>& decomp, std::span<const double> h_coords);

}  // namespace orbitforge
