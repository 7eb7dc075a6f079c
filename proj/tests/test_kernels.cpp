#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "ffkg/kernels.hpp"

using namespace ffkg::kernels;

namespace {

std::vector<cplx> random_field(std::size_t m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(m);
  for (auto& z : v) z = {nd(rng), nd(rng)};
  return v;
}

const Stencil kStencil{0.9, 0.3, -0.4, 1.1, 0.8, 1.05};

}  // namespace

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937_64 rng(9);
  for (std::size_t m : {std::size_t{17}, kParallelThreshold + 3}) {
    const auto prev = random_field(m, rng);
    const auto cur = random_field(m, rng);
    const auto next = random_field(m, rng);
    std::vector<cplx> a(m), b(m);

    assemble_rhs_serial(kStencil, prev, cur, a);
    assemble_rhs_omp(kStencil, prev, cur, b);
    CHECK(a == b);

    scheme_residual_serial(kStencil, prev, cur, next, a);
    scheme_residual_omp(kStencil, prev, cur, next, b);
    CHECK(a == b);

    a = cur;
    b = cur;
    divide_modes_serial(a, next);
    divide_modes_omp(b, next);
    CHECK(a == b);

    a = cur;
    b = cur;
    cubic_phase_serial(a, 0.37);
    cubic_phase_omp(b, 0.37);
    CHECK(a == b);

    a = next;
    b = next;
    cubic_kick_serial(cur, a, 0.01);
    cubic_kick_omp(cur, b, 0.01);
    CHECK(a == b);
  }
}

TEST_CASE("right-hand side and residual are consistent") {
  // If next solves c_tt next_j - c_mix (next_{j+1} - next_{j-1}) = rhs_j, the
  // residual vanishes. Build rhs from a chosen next and compare.
  std::mt19937_64 rng(10);
  const std::size_t m = 24;
  const auto prev = random_field(m, rng);
  const auto cur = random_field(m, rng);
  const auto next = random_field(m, rng);
  std::vector<cplx> rhs(m), res(m);
  assemble_rhs_serial(kStencil, prev, cur, rhs);
  scheme_residual_serial(kStencil, prev, cur, next, res);
  for (std::size_t j = 0; j < m; ++j) {
    const cplx implicit = kStencil.c_tt * next[j] -
                          kStencil.c_mix * (next[(j + 1) % m] - next[(j + m - 1) % m]);
    CHECK(std::abs(res[j] - (implicit - rhs[j])) <= 1e-13);
  }
}

TEST_CASE("pointwise nonlinear flows") {
  std::mt19937_64 rng(11);
  auto a = random_field(50, rng);
  const auto before = a;
  cubic_phase_serial(a, 2.5);
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(std::abs(a[j]) == doctest::Approx(std::abs(before[j])).epsilon(1e-15));
    CHECK(std::abs(a[j] - before[j] * std::polar(1.0, 2.5 * std::norm(before[j]))) <= 1e-14);
  }
  std::vector<cplx> u{{2.0, 0.0}}, p{{1.0, 1.0}};
  cubic_kick_serial(u, p, 0.5);
  CHECK(p[0] == cplx{-3.0, 1.0});
}
