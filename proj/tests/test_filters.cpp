#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ffkg/error.hpp"
#include "ffkg/filters.hpp"

using namespace ffkg;

namespace {

using ld = long double;

// Taylor sums in extended precision, written from the power series directly.
ld series_sin(ld z) {
  ld term = z, sum = 0;
  for (int k = 0; k < 30; ++k) {
    sum += term;
    term *= -z * z / ((2 * k + 2) * (2 * k + 3));
  }
  return sum;
}
ld series_cos(ld z) {
  ld term = 1, sum = 0;
  for (int k = 0; k < 30; ++k) {
    sum += term;
    term *= -z * z / ((2 * k + 1) * (2 * k + 2));
  }
  return sum;
}
// (sin z - z cos z) / z^3 = sum_k (-1)^k 2(k+1) z^{2k} / (2k+3)!
ld series_smzc_over_z3(ld z) {
  ld sum = 0, fact = 6;  // 3!
  ld zp = 1;
  for (int k = 0; k < 30; ++k) {
    sum += ((k % 2) ? -1 : 1) * 2.0L * (k + 1) * zp / fact;
    zp *= z * z;
    fact *= (2 * k + 4) * (2 * k + 5);
  }
  return sum;
}

struct Oracle {
  ld sinc, tanc, phi1, psi1, phi2, psi2;
};

Oracle oracle(ld z) {
  const ld s = series_sin(z), c = series_cos(z);
  Oracle o;
  o.sinc = s / z;
  o.tanc = s / c / z;
  o.phi1 = 1.5L * o.sinc - 0.5L * c;
  o.psi1 = 3 * series_smzc_over_z3(z);
  o.phi2 = c + 0.5L * s * s / c;
  o.psi2 = o.sinc * o.tanc;
  return o;
}

}  // namespace

TEST_CASE("closed-form values at special angles") {
  CHECK(sinc(kPi / 2) == doctest::Approx(2 / kPi).epsilon(1e-15));
  CHECK(tanc(kPi / 4) == doctest::Approx(4 / kPi).epsilon(1e-15));
  CHECK(phi1(kPi) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(psi1(kPi) == doctest::Approx(3 / (kPi * kPi)).epsilon(1e-15));
  CHECK(phi2(kPi / 4) == doctest::Approx(3 * std::sqrt(2.0) / 4).epsilon(1e-15));
  CHECK(psi2(kPi / 4) == doctest::Approx(8 * std::sqrt(2.0) / (kPi * kPi)).epsilon(1e-15));
  CHECK(psi2(kPi / 4) == doctest::Approx(1.146318).epsilon(1e-6));
}

TEST_CASE("all filters equal one at zero") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(tanc(0.0) == 1.0);
  CHECK(phi1(0.0) == 1.0);
  CHECK(psi1(0.0) == 1.0);
  CHECK(phi2(0.0) == 1.0);
  CHECK(psi2(0.0) == 1.0);
}

TEST_CASE("agreement with an extended-precision series oracle") {
  for (double z = 1e-7; z < 0.6; z *= 1.37) {
    for (double sgn : {1.0, -1.0}) {
      const double x = sgn * z;
      const Oracle o = oracle(x);
      CAPTURE(x);
      CHECK(std::abs(sinc(x) - static_cast<double>(o.sinc)) <= 1e-15);
      CHECK(std::abs(tanc(x) - static_cast<double>(o.tanc)) <= 1e-15);
      CHECK(std::abs(phi1(x) - static_cast<double>(o.phi1)) <= 1e-15);
      CHECK(std::abs(psi1(x) - static_cast<double>(o.psi1)) <= 1e-15);
      CHECK(std::abs(phi2(x) - static_cast<double>(o.phi2)) <= 1e-15);
      CHECK(std::abs(psi2(x) - static_cast<double>(o.psi2)) <= 1e-15);
    }
  }
}

TEST_CASE("series switch is seamless") {
  for (double z : {0.999e-4, 1.0e-4, 1.001e-4}) {
    const Oracle o = oracle(z);
    CHECK(std::abs(psi1(z) - static_cast<double>(o.psi1)) <= 1e-13);
    CHECK(std::abs(phi1(z) - static_cast<double>(o.phi1)) <= 1e-13);
    CHECK(std::abs(phi2(z) - static_cast<double>(o.phi2)) <= 1e-13);
  }
}

TEST_CASE("filters are even") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double z = u(rng);
    CHECK(sinc(z) == sinc(-z));
    CHECK(phi1(z) == phi1(-z));
    CHECK(psi1(z) == psi1(-z));
    CHECK(phi2(z) == doctest::Approx(phi2(-z)).epsilon(1e-14));
  }
}

TEST_CASE("sin(z) - z cos(z) without cancellation") {
  for (double z : {1e-8, 1e-5, 1e-3, 0.1, 0.5, 0.99}) {
    const ld ref = series_smzc_over_z3(z) * static_cast<ld>(z) * z * z;
    CHECK(sin_minus_zcos(z) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-15));
  }
  CHECK(sin_minus_zcos(3.0) == doctest::Approx(std::sin(3.0) - 3.0 * std::cos(3.0)).epsilon(1e-14));
}

TEST_CASE("tangent poles are guarded") {
  CHECK_THROWS_AS(tanc(kPi / 2), Error);
  CHECK_THROWS_AS(phi2(3 * kPi / 2), Error);
  try {
    psi2(kPi / 2);
    FAIL("expected PoleProximity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleProximity);
  }
  CHECK_NOTHROW(tanc(kPi / 2 - 1e-3));
}

TEST_CASE("reduced angles") {
  SUBCASE("round trip and trigonometry") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 500; ++i) {
      const double z = u(rng);
      const ReducedAngle a = ReducedAngle::from_value(z);
      CHECK(std::abs(a.offset) <= kPi / 4 + 1e-15);
      CHECK(a.value() == doctest::Approx(z).epsilon(1e-15));
      CHECK(std::abs(a.sin() - std::sin(z)) <= 1e-12);
      CHECK(std::abs(a.cos() - std::cos(z)) <= 1e-12);
      CHECK(std::abs(sinc(a) - sinc(z)) <= 1e-14);
    }
  }
  SUBCASE("negation") {
    const ReducedAngle a = ReducedAngle::from_value(7.3);
    CHECK((-a).sin() == -a.sin());
    CHECK((-a).cos() == a.cos());
  }
  SUBCASE("multiples") {
    const double z = 12.345678;
    const ReducedAngle a = ReducedAngle::from_value(z);
    for (std::int64_t n : {0, 1, 2, 17, 1000, -999}) {
      const ld exact = static_cast<ld>(a.quarter_turns) * n * (3.14159265358979323846264338L / 2) +
                       static_cast<ld>(a.offset) * n;
      const ReducedAngle m = a.times(n);
      CAPTURE(n);
      CHECK(std::abs(m.sin() - static_cast<double>(std::sin(exact))) <= 1e-13);
      CHECK(std::abs(m.cos() - static_cast<double>(std::cos(exact))) <= 1e-13);
      CHECK(std::abs(std::abs(m.phasor()) - 1.0) <= 1e-15);
    }
  }
  SUBCASE("large angles keep full precision of the offset") {
    const ReducedAngle q{400000001, 1e-9};
    CHECK(q.sin() == doctest::Approx(std::cos(1e-9)).epsilon(1e-15));
    CHECK(q.cos() == doctest::Approx(-std::sin(1e-9)).epsilon(1e-15));
    const ReducedAngle a{400000000, 1e-9};
    CHECK(a.sin() == doctest::Approx(std::sin(1e-9)).epsilon(1e-15));
    CHECK(tanc(a) == doctest::Approx(std::tan(1e-9) / a.value()).epsilon(1e-14));
  }
}

TEST_CASE("evaluate_filters matches the individual functions") {
  const ReducedAngle a = ReducedAngle::from_value(-64.3);
  const ReducedAngle b = ReducedAngle::from_value(9.5);
  const FilterValues f = evaluate_filters(a, b);
  CHECK(f.sinc_a == sinc(a));
  CHECK(f.sinc_b == sinc(b));
  CHECK(f.tanc_b == tanc(b));
  CHECK(f.phi1_a == phi1(a));
  CHECK(f.psi1_a == psi1(a));
  CHECK(f.phi2_b == phi2(b));
  CHECK(f.psi2_b == psi2(b));
}

TEST_CASE("small-argument bounds") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> le(std::log(1e-12), std::log(1e-4));
  for (int i = 0; i < 1000; ++i) {
    const double z = std::exp(le(rng));
    const double z2 = z * z;
    CHECK(std::abs(psi1(z) - 1.0) <= z2);
    CHECK(std::abs(psi2(z) - 1.0) <= z2);
    CHECK(std::abs(phi1(z) - 1.0) <= std::max(z2 * z2, 1e-16));
    CHECK(std::abs(phi2(z) - 1.0) <= std::max(z2 * z2, 1e-16));
  }
}

TEST_CASE("psi2 matches its defining quotient") {
  for (double z : {0.3, 0.7, 1.0, 1.3, 2.0, 2.9, 4.0, 7.5}) {
    CAPTURE(z);
    const double lhs = psi2(z) * z * z / 2;
    const double rhs = phi2(z) - std::cos(z);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
  }
}
