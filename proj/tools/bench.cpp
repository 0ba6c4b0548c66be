// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>

#include "fdstab/evolution.hpp"
#include "fdstab/io.hpp"
#include "fdstab/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace fdstab;
using clk = std::chrono::steady_clock;

namespace {

template <typename F>
double time_ms(F&& fn, int reps) {
  fn();  // warm up
  const auto t0 = clk::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = clk::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both columns run serially\n");
#endif
  const Scheme s = builtin_lf_example();

  {
    const int n = 1 << 18;
    report("symbol curve (2^18 pts)",
           time_ms([&] { (void)sample_symbol_curve(s, n, false); }, 3),
           time_ms([&] { (void)sample_symbol_curve(s, n, true); }, 3));
  }
  {
    std::vector<double> thetas;
    for (int i = 0; i < 8192; ++i) thetas.push_back(-3.1 + 6.2 * i / 8192.0);
    report("determinant scan (8192 pts)",
           time_ms([&] { (void)lopatinskii_profile(s, thetas, false); }, 3),
           time_ms([&] { (void)lopatinskii_profile(s, thetas, true); }, 3));
  }
  {
    report("contour kernel (512 nodes)",
           time_ms([&] { (void)temporal_green_contour(s, 3, 20, 1.2, 512, 400, false); }, 3),
           time_ms([&] { (void)temporal_green_contour(s, 3, 20, 1.2, 512, 400, true); }, 3));
  }
  {
    report("norm probe (12 trials)",
           time_ms([&] { (void)power_norm_probe(s, 500, 40, 12, 1u, false); }, 2),
           time_ms([&] { (void)power_norm_probe(s, 500, 40, 12, 1u, true); }, 2));
  }
  return 0;
}
