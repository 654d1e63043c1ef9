// Benchmark of the OpenMP grid-scan kernel and the multi-start estimator
// against their serial execution, with an agreement check on every row.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ptolemy/curves.hpp"
#include "ptolemy/optimizer.hpp"

using namespace ptolemy;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  const std::string curve_text = argc > 1 ? argv[1] : "ellipse:0.8";
  const CurveSpec curve = CurveSpec::parse(curve_text);
  const int threads = max_threads();

  std::printf("curve=%s threads=%d\n\n", curve.to_string().c_str(), threads);
  std::printf("grid scan: serial reference vs OpenMP kernel\n");
  std::printf("%6s %12s %12s %9s %10s\n", "n", "serial[s]", "parallel[s]",
              "speedup", "identical");
  for (int n : {48, 96, 144}) {
    auto t0 = std::chrono::steady_clock::now();
    const GridResult ref = grid_search_serial(curve, n);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const GridResult par = grid_search(curve, n);
    const double parallel_s = seconds_since(t0);

    const bool same = ref.value == par.value && ref.argmax.t == par.argmax.t &&
                      ref.evaluated == par.evaluated;
    std::printf("%6d %12.4f %12.4f %8.2fx %10s\n", n, serial_s, parallel_s,
                serial_s / parallel_s, same ? "yes" : "NO");
  }

  std::printf("\nmulti-start estimate (default options)\n");
  OptimizeOptions opts;
  set_threads(1);
  auto t0 = std::chrono::steady_clock::now();
  const EstimateResult one = estimate_ptolemy_constant(curve, opts);
  const double one_s = seconds_since(t0);

  set_threads(threads);
  t0 = std::chrono::steady_clock::now();
  const EstimateResult many = estimate_ptolemy_constant(curve, opts);
  const double many_s = seconds_since(t0);

  const bool same = one.value == many.value && one.argmax.t == many.argmax.t;
  std::printf("1 thread %.4fs, %d threads %.4fs, speedup %.2fx, identical %s\n",
              one_s, threads, many_s, one_s / many_s, same ? "yes" : "NO");
  std::printf("estimate=%.12f status=%s\n", many.value, to_string(many.status));
  return same ? 0 : 1;
}
