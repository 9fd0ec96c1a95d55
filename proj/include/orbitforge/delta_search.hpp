#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitforge/homogeneous_space.hpp"
#include "orbitforge/orbit_invariants.hpp"

namespace orbitforge {

/// Multi-start ascent of f(Q) = |proj_p(Q W Q^-1)|^2_metric over the group.
struct DeltaSearchConfig {
  int restarts = 64;
  int max_iters = 500;
  /// Initial Cayley step length along the gradient; reset every iteration and halved on non-increase.
  double step = 0.5;
  std::uint64_t seed = 0;
  double gradient_tol = 1e-9;
  /// Below this step length an iteration is treated as stalled.
  double step_floor = 1e-14;
};

enum class Verdict { Refuted, NotRefuted };
std::string to_string(Verdict v);

template <class T>
struct DeltaSearchReport {
  double start_value = 0.0;
  double best_value = 0.0;
  Matrix<T> best_group_element;
  int restarts_used = 0;
  /// Total ascent iterations over all restarts.
  long long iterations = 0;
  /// Restart that produced best_value, or -1 for the identity.
  int best_restart = -1;
  Verdict verdict = Verdict::NotRefuted;
  std::optional<OrbitGapCertificate> certificate;
};

/// Refuted iff best_value > start_value + 1e-7 or a certificate is attached.
template <class T>
Verdict decide_verdict(const DeltaSearchReport<T>& r);

/// Attach an exact certificate and re-evaluate the verdict.
template <class T>
void attach_certificate(DeltaSearchReport<T>& r, OrbitGapCertificate cert);

/// Thrown when a Cayley step keeps failing after the step has been halved to the floor.
template <class T>
class SearchAborted : public Error {
 public:
  SearchAborted(const std::string& what, DeltaSearchReport<T> partial) : Error(what), partial_(std::move(partial)) {}
  const DeltaSearchReport<T>& partial() const { return partial_; }

 private:
  DeltaSearchReport<T> partial_;
};

/// f(Q) for the given W.
template <class T>
double orbit_objective(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
                       const Matrix<T>& q);

/// Gradient of U -> f(cayley(U) Q) at U = 0, as an algebra element: 2 [V, x1 V_p1 + x2 V_p2], V = Q W Q^-1.
template <class T>
Matrix<T> orbit_gradient(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
                         const Matrix<T>& q);

/// One ascent run from q0. Returns the final value and element; adds the iteration count to *iters.
template <class T>
double ascend(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
              Matrix<T>& q, const DeltaSearchConfig& cfg, long long* iters);

/// Deterministic starting element of restart `index` (Haar, seeded by derive_seed(seed, index)).
template <class T>
Matrix<T> restart_start(const ReductiveDecomposition<T>& decomp, std::uint64_t seed, int index);

/// Restarts distributed over OpenMP threads; identical output to delta_search_serial.
template <class T>
DeltaSearchReport<T> delta_search(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                  const AlgebraElement<T>& w, const DeltaSearchConfig& cfg = {});

/// Single-threaded reference.
template <class T>
DeltaSearchReport<T> delta_search_serial(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                         const AlgebraElement<T>& w, const DeltaSearchConfig& cfg = {});

}  // namespace orbitforge
