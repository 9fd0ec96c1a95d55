#include "orbitforge/delta_search.hpp"

#include <exception>
#include <type_traits>

#include "orbitforge/linalg.hpp"
#include "orbitforge/tolerances.hpp"

namespace orbitforge {

std::string to_string(Verdict v) { return v == Verdict::Refuted ? "refuted" : "not-refuted"; }

template <class T>
Verdict decide_verdict(const DeltaSearchReport<T>& r) {
  const bool certified = r.certificate && r.certificate->holds();
  return (certified || r.best_value > r.start_value + tol::kCertificate) ? Verdict::Refuted : Verdict::NotRefuted;
}

template <class T>
void attach_certificate(DeltaSearchReport<T>& r, OrbitGapCertificate cert) {
  r.certificate = std::move(cert);
  r.verdict = decide_verdict(r);
}

template <class T>
double orbit_objective(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
                       const Matrix<T>& q) {
  return decomp.metric_norm2(params, q * w * adjoint(q));
}

template <class T>
Matrix<T> orbit_gradient(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
                         const Matrix<T>& q) {
  // d/dt f(exp(tU) Q) = 2 <G, [U, V]> = 2 <[V, G], U> with G the metric dual of V_p.
  const Matrix<T> v = q * w * adjoint(q);
  const Matrix<T> g = decomp.weighted_p(params, v);
  return 2.0 * bracket(v, g);
}

template <class T>
double ascend(const ReductiveDecomposition<T>& decomp, const MetricParams& params, const Matrix<T>& w,
              Matrix<T>& q, const DeltaSearchConfig& cfg, long long* iters) {
  const LieAlgebra<T>& alg = *decomp.algebra();
  double f = orbit_objective(decomp, params, w, q);
  for (int it = 0; it < cfg.max_iters; ++it) {
    const Matrix<T> grad = orbit_gradient(decomp, params, w, q);
    if (alg.norm(grad) < cfg.gradient_tol) break;
    ++*iters;
    bool accepted = false;
    bool retracted = false;
    for (double t = cfg.step; t >= cfg.step_floor; t *= 0.5) {
      Matrix<T> next;
      try {
        next = cayley_retract(t * grad) * q;
      } catch (const RetractionFailure&) {
        continue;
      }
      retracted = true;
      const double fn = orbit_objective(decomp, params, w, next);
      if (fn > f) {
        q = std::move(next);
        f = fn;
        accepted = true;
        break;
      }
    }
    if (!retracted) throw RetractionFailure("Cayley step failed down to the step floor");
    // No increase at any step length: stationary to working precision.
    if (!accepted) break;
  }
  return f;
}

template <class T>
Matrix<T> restart_start(const ReductiveDecomposition<T>& decomp, std::uint64_t seed, int index) {
  const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(index));
  if constexpr (std::is_same_v<T, double>) {
    return haar_orthogonal(static_cast<int>(decomp.algebra()->matrix_size()), s);
  } else {
    return haar_symplectic(static_cast<int>(decomp.algebra()->matrix_size()), s);
  }
}

namespace {

template <class T>
struct RestartResult {
  double value = 0.0;
  Matrix<T> element;
  long long iterations = 0;
  std::exception_ptr error;
};

template <class T>
RestartResult<T> run_restart(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                             const Matrix<T>& w, const DeltaSearchConfig& cfg, int index) {
  RestartResult<T> r;
  try {
    r.element = restart_start(decomp, cfg.seed, index);
    r.value = ascend(decomp, params, w, r.element, cfg, &r.iterations);
  } catch (...) {
    r.error = std::current_exception();
  }
  return r;
}

template <class T>
void validate(const ReductiveDecomposition<T>& decomp, const AlgebraElement<T>& w, const DeltaSearchConfig& cfg) {
  if (!w.algebra().same_as(*decomp.algebra())) throw AlgebraMismatch("W is not in the space's algebra");
  if (cfg.restarts < 0 || cfg.max_iters < 0) throw PreconditionError("restarts and max_iters must be nonnegative");
  if (!(cfg.step > 0.0)) throw PreconditionError("step must be positive");
}

// Max over the identity and every restart; ties keep the lowest index.
template <class T>
DeltaSearchReport<T> reduce(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                            const AlgebraElement<T>& w, std::vector<RestartResult<T>>& results) {
  DeltaSearchReport<T> rep;
  const std::size_t n = decomp.algebra()->matrix_size();
  rep.start_value = decomp.metric_norm2(params, w.matrix());
  rep.best_value = rep.start_value;
  rep.best_group_element = Matrix<T>::identity(n);
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < results.size(); ++i) {
    RestartResult<T>& r = results[i];
    if (r.error) {
      if (!first_error) first_error = r.error;
      continue;
    }
    ++rep.restarts_used;
    rep.iterations += r.iterations;
    if (r.value > rep.best_value) {
      rep.best_value = r.value;
      rep.best_group_element = std::move(r.element);
      rep.best_restart = static_cast<int>(i);
    }
  }
  rep.verdict = decide_verdict(rep);
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const Error& e) {
      throw SearchAborted<T>(std::string("orbit search aborted: ") + e.what(), std::move(rep));
    }
  }
  return rep;
}

}  // namespace

template <class T>
DeltaSearchReport<T> delta_search(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                  const AlgebraElement<T>& w, const DeltaSearchConfig& cfg) {
  validate(decomp, w, cfg);
  std::vector<RestartResult<T>> results(static_cast<std::size_t>(cfg.restarts));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < cfg.restarts; ++i) {
    results[static_cast<std::size_t>(i)] = run_restart(decomp, params, w.matrix(), cfg, i);
  }
  return reduce(decomp, params, w, results);
}

template <class T>
DeltaSearchReport<T> delta_search_serial(const ReductiveDecomposition<T>& decomp, const MetricParams& params,
                                         const AlgebraElement<T>& w, const DeltaSearchConfig& cfg) {
  validate(decomp, w, cfg);
  std::vector<RestartResult<T>> results;
  results.reserve(static_cast<std::size_t>(cfg.restarts));
  for (int i = 0; i < cfg.restarts; ++i) results.push_back(run_restart(decomp, params, w.matrix(), cfg, i));
  return reduce(decomp, params, w, results);
}

#define ORBITFORGE_INSTANTIATE(T)                                                                                \
  template Verdict decide_verdict(const DeltaSearchReport<T>&);                                                 \
  template void attach_certificate(DeltaSearchReport<T>&, OrbitGapCertificate);                                 \
  template double orbit_objective(const ReductiveDecomposition<T>&, const MetricParams&, const Matrix<T>&,       \
                                  const Matrix<T>&);                                                             \
  template Matrix<T> orbit_gradient(const ReductiveDecomposition<T>&, const MetricParams&, const Matrix<T>&,     \
                                    const Matrix<T>&);                                                           \
  template double ascend(const ReductiveDecomposition<T>&, const MetricParams&, const Matrix<T>&, Matrix<T>&,    \
                         const DeltaSearchConfig&, long long*);                                                  \
  template Matrix<T> restart_start(const ReductiveDecomposition<T>&, std::uint64_t, int);                        \
  template DeltaSearchReport<T> delta_search(const ReductiveDecomposition<T>&, const MetricParams&,              \
                                             const AlgebraElement<T>&, const DeltaSearchConfig&);                \
  template DeltaSearchReport<T> delta_search_serial(const ReductiveDecomposition<T>&, const MetricParams&,       \
                                                    const AlgebraElement<T>&, const DeltaSearchConfig&);

ORBITFORGE_INSTANTIATE(double)
ORBITFORGE_INSTANTIATE(Quaternion)
#undef ORBITFORGE_INSTANTIATE

}  // namespace orbitforge
