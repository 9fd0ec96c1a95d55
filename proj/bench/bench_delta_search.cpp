// Wall-clock comparison of the OpenMP and serial multi-start searches.
//
//   bench_delta_search [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "orbitforge/delta_search.hpp"

using namespace orbitforge;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

template <class T>
void compare(const char* label, const ReductiveDecomposition<T>& dec, const MetricParams& p, const AlgebraElement<T>& w,
             int repeats) {
  DeltaSearchConfig cfg;
  double par_value = 0.0, ser_value = 0.0;
  const double par = best_of(repeats, [&] { par_value = delta_search(dec, p, w, cfg).best_value; });
  const double ser = best_of(repeats, [&] { ser_value = delta_search_serial(dec, p, w, cfg).best_value; });
  std::printf("%-24s parallel %9.1f ms   serial %9.1f ms   speedup %5.2fx   same result: %s\n", label, par, ser,
              ser / par, par_value == ser_value ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, restarts: %d, best of %d\n", omp_get_max_threads(), DeltaSearchConfig{}.restarts, repeats);
  const MetricParams p(1.0, 1.5);
  compare("SO(7)/U(3) preset", build_so_decomposition(3), p, make_so7_vector(So7Preset::PairA, p), repeats);
  for (int l = 2; l <= 4; ++l) {
    const std::string label = "Sp(" + std::to_string(l) + ") candidate";
    compare(label.c_str(), build_sp_decomposition(l), p, make_sp_candidate(l, 1.0, 1.0, p), repeats);
  }
  return 0;
}
