#pragma once

#include <complex>
#include <cstdint>

namespace ffkg {

inline constexpr double kPi = 3.14159265358979323846;

/// Series branches are used for |z| below this value.
inline constexpr double kSeriesSwitch = 1e-4;
/// Minimum distance to a tangent pole before PoleProximity is raised.
inline constexpr double kPoleGuard = 1e-6;

/// An angle stored as quarter_turns * pi/2 + offset with |offset| <= pi/4.
///
/// The time and space filter arguments become very large for small epsilon
/// (|alpha| ~ tau / epsilon^2), where a plain double keeps only a few correct
/// digits of sin/cos. Keeping the reduced offset separately makes every
/// trigonometric evaluation exact to rounding; value() is used only where the
/// angle enters algebraically.
struct ReducedAngle {
  std::int64_t quarter_turns = 0;
  double offset = 0.0;

  static ReducedAngle from_value(double z);

  double value() const { return static_cast<double>(quarter_turns) * (0.5 * kPi) + offset; }
  double sin() const;
  double cos() const;
  /// Distance from the nearest pole of tan.
  double pole_distance() const;
  double tan() const;

  /// (n * angle) reduced again.
  ReducedAngle times(std::int64_t n) const;
  ReducedAngle operator-() const { return {-quarter_turns, -offset}; }
  /// exp(i * angle)
  std::complex<double> phasor() const;
};

double sinc(double z);
double tanc(double z);
double phi1(double z);
double psi1(double z);
double phi2(double z);
double psi2(double z);

double sinc(const ReducedAngle& z);
double tanc(const ReducedAngle& z);
double phi1(const ReducedAngle& z);
double psi1(const ReducedAngle& z);
double phi2(const ReducedAngle& z);
double psi2(const ReducedAngle& z);

/// sin(z) - z cos(z), free of cancellation for small |z|.
double sin_minus_zcos(double z);

/// All filter values needed by the scheme at one (alpha, beta) pair.
struct FilterValues {
  double sinc_a = 1.0;
  double sinc_b = 1.0;
  double tanc_b = 1.0;
  double phi1_a = 1.0;
  double psi1_a = 1.0;
  double phi2_b = 1.0;
  double psi2_b = 1.0;
};

FilterValues evaluate_filters(const ReducedAngle& alpha, const ReducedAngle& beta);

}  // namespace ffkg
