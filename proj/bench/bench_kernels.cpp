// Serial versus OpenMP grid kernels. Prints one line per (kernel, size) with
// the best-of-repeats time of each version and whether the outputs agree.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "ffkg/kernels.hpp"

namespace {

using ffkg::kernels::cplx;

std::vector<cplx> random_field(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(m);
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return v;
}

double best_seconds(const std::function<void()>& fn, int repeats) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, std::size_t m, double serial, double parallel, bool same) {
  std::printf("%-16s M=%-8zu serial %10.3f us  omp %10.3f us  speedup %5.2f  %s\n", name, m,
              serial * 1e6, parallel * 1e6, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);
  const ffkg::kernels::Stencil s{0.9, 0.3, -0.4, 1.1, 0.8, 1.05};
  std::printf("threads: %d\n", omp_get_max_threads());
  bool all_same = true;

  for (std::size_t m : {std::size_t{1} << 10, std::size_t{1} << 14, std::size_t{1} << 18}) {
    const int repeats = m > 100000 ? 20 : 200;
    const auto prev = random_field(m, rng);
    const auto cur = random_field(m, rng);
    const auto next = random_field(m, rng);
    std::vector<cplx> a(m), b(m);

    double ts = best_seconds([&] { ffkg::kernels::assemble_rhs_serial(s, prev, cur, a); }, repeats);
    double tp = best_seconds([&] { ffkg::kernels::assemble_rhs_omp(s, prev, cur, b); }, repeats);
    bool same = a == b;
    report("assemble_rhs", m, ts, tp, same);
    all_same = all_same && same;

    ts = best_seconds([&] { ffkg::kernels::scheme_residual_serial(s, prev, cur, next, a); },
                      repeats);
    tp = best_seconds([&] { ffkg::kernels::scheme_residual_omp(s, prev, cur, next, b); }, repeats);
    same = a == b;
    report("scheme_residual", m, ts, tp, same);
    all_same = all_same && same;

    a = cur;
    b = cur;
    ts = best_seconds([&] { ffkg::kernels::cubic_phase_serial(a, 1e-3); }, repeats);
    tp = best_seconds([&] { ffkg::kernels::cubic_phase_omp(b, 1e-3); }, repeats);
    same = a == b;
    report("cubic_phase", m, ts, tp, same);
    all_same = all_same && same;

    a = next;
    b = next;
    ts = best_seconds([&] { ffkg::kernels::cubic_kick_serial(cur, a, 1e-3); }, repeats);
    tp = best_seconds([&] { ffkg::kernels::cubic_kick_omp(cur, b, 1e-3); }, repeats);
    same = a == b;
    report("cubic_kick", m, ts, tp, same);
    all_same = all_same && same;
  }
  return all_same ? 0 : 1;
}
