#include "ffkg/filters.hpp"

#include <cmath>

#include "ffkg/error.hpp"

namespace ffkg {

namespace {

// z together with its sine and cosine, however they were obtained.
struct Trig {
  double z;
  double s;
  double c;
};

Trig trig_of(double z) { return {z, std::sin(z), std::cos(z)}; }
Trig trig_of(const ReducedAngle& a) { return {a.value(), a.sin(), a.cos()}; }

void check_pole(const Trig& t) {
  // |cos z| equals the pole distance to first order.
  if (std::abs(t.c) < kPoleGuard) {
    throw Error(ErrorCode::PoleProximity,
                "argument " + std::to_string(t.z) + " is within the tan pole guard");
  }
}

double sinc_impl(const Trig& t) {
  const double z2 = t.z * t.z;
  if (std::abs(t.z) < kSeriesSwitch) return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  return t.s / t.z;
}

double tanc_impl(const Trig& t) {
  check_pole(t);
  const double z2 = t.z * t.z;
  if (std::abs(t.z) < kSeriesSwitch) return 1.0 + z2 / 3.0 + 2.0 * z2 * z2 / 15.0;
  return t.s / (t.c * t.z);
}

double phi1_impl(const Trig& t) {
  const double z2 = t.z * t.z;
  if (std::abs(t.z) < kSeriesSwitch) return 1.0 - z2 * z2 / 120.0;
  return 1.5 * t.s / t.z - 0.5 * t.c;
}

double psi1_impl(const Trig& t) {
  const double z = t.z;
  const double z2 = z * z;
  if (std::abs(z) < kSeriesSwitch) return 1.0 - z2 / 10.0 + z2 * z2 / 280.0;
  // psi1 = 3 (sin z - z cos z) / z^3
  const double numer = std::abs(z) < 1.0 ? sin_minus_zcos(z) : t.s - z * t.c;
  return 3.0 * numer / (z2 * z);
}

double phi2_impl(const Trig& t) {
  check_pole(t);
  const double z2 = t.z * t.z;
  if (std::abs(t.z) < kSeriesSwitch) return 1.0 + z2 * z2 / 8.0;
  return t.c + 0.5 * t.s * (t.s / t.c);
}

double psi2_impl(const Trig& t) { return sinc_impl(t) * tanc_impl(t); }

}  // namespace

ReducedAngle ReducedAngle::from_value(double z) {
  const double quarter = 0.5 * kPi;
  const double r = std::remainder(z, quarter);
  const auto q = static_cast<std::int64_t>(std::llround((z - r) / quarter));
  return {q, r};
}

namespace {
int quadrant(std::int64_t q) { return static_cast<int>(((q % 4) + 4) % 4); }
}  // namespace

double ReducedAngle::sin() const {
  switch (quadrant(quarter_turns)) {
    case 0: return std::sin(offset);
    case 1: return std::cos(offset);
    case 2: return -std::sin(offset);
    default: return -std::cos(offset);
  }
}

double ReducedAngle::cos() const {
  switch (quadrant(quarter_turns)) {
    case 0: return std::cos(offset);
    case 1: return -std::sin(offset);
    case 2: return -std::cos(offset);
    default: return std::sin(offset);
  }
}

double ReducedAngle::pole_distance() const {
  return (quadrant(quarter_turns) % 2 == 1) ? std::abs(offset) : 0.5 * kPi - std::abs(offset);
}

double ReducedAngle::tan() const { return sin() / cos(); }

ReducedAngle ReducedAngle::times(std::int64_t n) const {
  const ReducedAngle rest = from_value(static_cast<double>(n) * offset);
  return {n * quarter_turns + rest.quarter_turns, rest.offset};
}

std::complex<double> ReducedAngle::phasor() const { return {cos(), sin()}; }

double sin_minus_zcos(double z) {
  if (std::abs(z) >= 1.0) return std::sin(z) - z * std::cos(z);
  // sum_{k>=1} (-1)^{k+1} 2k z^{2k+1} / (2k+1)!
  const double z2 = z * z;
  double power = z;  // z^{2k+1} / (2k+1)! built incrementally
  double sum = 0.0;
  for (int k = 1; k <= 12; ++k) {
    power *= z2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double term = 2.0 * k * power;
    sum += (k % 2 == 1) ? term : -term;
  }
  return sum;
}

double sinc(double z) { return sinc_impl(trig_of(z)); }
double tanc(double z) { return tanc_impl(trig_of(z)); }
double phi1(double z) { return phi1_impl(trig_of(z)); }
double psi1(double z) { return psi1_impl(trig_of(z)); }
double phi2(double z) { return phi2_impl(trig_of(z)); }
double psi2(double z) { return psi2_impl(trig_of(z)); }

double sinc(const ReducedAngle& z) { return sinc_impl(trig_of(z)); }
double tanc(const ReducedAngle& z) { return tanc_impl(trig_of(z)); }
double phi1(const ReducedAngle& z) { return phi1_impl(trig_of(z)); }
double psi1(const ReducedAngle& z) { return psi1_impl(trig_of(z)); }
double phi2(const ReducedAngle& z) { return phi2_impl(trig_of(z)); }
double psi2(const ReducedAngle& z) { return psi2_impl(trig_of(z)); }

FilterValues evaluate_filters(const ReducedAngle& alpha, const ReducedAngle& beta) {
  const Trig a = trig_of(alpha);
  const Trig b = trig_of(beta);
  FilterValues f;
  f.sinc_a = sinc_impl(a);
  f.phi1_a = phi1_impl(a);
  f.psi1_a = psi1_impl(a);
  f.sinc_b = sinc_impl(b);
  f.tanc_b = tanc_impl(b);
  f.phi2_b = phi2_impl(b);
  f.psi2_b = f.sinc_b * f.tanc_b;
  return f;
}

}  // namespace ffkg
