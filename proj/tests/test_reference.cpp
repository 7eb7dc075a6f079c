#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ffkg/error.hpp"
#include "ffkg/reference.hpp"

using namespace ffkg;

namespace {

double l2(const EnvelopeField& a) {
  double s = 0.0;
  for (const cplx& z : a.values) s += std::norm(z);
  return std::sqrt(s * a.grid.h());
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

EnvelopeField gaussian_envelope(const PeriodicGrid& g) {
  EnvelopeField a(g, 0.0);
  for (std::size_t j = 0; j < g.size(); ++j) a[j] = 0.8 * std::exp(-g.node(j) * g.node(j));
  return a;
}

}  // namespace

TEST_CASE("initial envelopes") {
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 64);
  const double omega = std::sqrt(2.0);
  const auto [ap, am] = nls_initial_envelopes(InitialProfiles::gaussian(), g, omega);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double e = std::exp(-g.node(j) * g.node(j));
    CHECK(std::abs(ap[j] - 0.146447 * e) <= 1e-6);
    CHECK(std::abs(am[j] - 0.853553 * e) <= 1e-6);
    CHECK(std::abs(ap[j] + am[j] - e) <= 1e-15);
  }
  const auto [rp, rm] = nls_initial_envelopes(InitialProfiles::right_moving(omega), g, omega);
  CHECK(max_norm(rm) <= 1e-16);
  CHECK(std::abs(rp[32] - 1.0) <= 1e-15);
}

TEST_CASE("Strang step on constant data") {
  const PhysicalSetup s = PhysicalSetup::make(0.1, 1.0, 1.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 32);
  EnvelopeField a(g, std::vector<cplx>(32, cplx{1.0, 0.0}));
  EnvelopeField b = a;
  NlsStepper plus(g, Branch::plus, s);
  NlsStepper minus(g, Branch::minus, s);
  for (int i = 0; i < 7; ++i) {
    plus.advance(a, 1.0 / 7);
    minus.advance(b, 1.0 / 7);
  }
  const cplx expected = std::polar(1.0, -1.0 / (2.0 * std::sqrt(2.0)));
  CHECK(std::abs(a[5] - expected) <= 1e-14);
  CHECK(std::abs(b[5] - std::conj(expected)) <= 1e-14);

  const PhysicalSetup lin = PhysicalSetup::make(0.1, 1.0, 0.0, 1.0);
  EnvelopeField c(g, std::vector<cplx>(32, cplx{0.3, -0.2}));
  const EnvelopeField d = nls_strang_step(c, 0.5, Branch::plus, lin);
  CHECK(max_diff(c.view(), d.view()) <= 1e-15);
}

TEST_CASE("free Schroedinger dispersion of a single mode") {
  const PhysicalSetup s = PhysicalSetup::make(0.1, 1.0, 0.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 32);
  const double k = g.wavenumber(3);
  EnvelopeField a(g, 0.0);
  for (std::size_t j = 0; j < 32; ++j) a[j] = std::polar(1.0, k * g.node(j));
  const EnvelopeField a0 = a;
  NlsStepper st(g, Branch::plus, s);
  for (int i = 0; i < 10; ++i) st.advance(a, 0.1);
  const cplx factor = std::polar(1.0, -(1 - s.c_g * s.c_g) * k * k * 1.0 / (2 * s.omega));
  for (std::size_t j = 0; j < 32; ++j) CHECK(std::abs(a[j] - a0[j] * factor) <= 1e-12);
}

TEST_CASE("Strang splitting is second order") {
  const PhysicalSetup s = PhysicalSetup::make(0.1, 1.0, 4.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 128);
  auto run = [&](double dt) {
    EnvelopeField a = gaussian_envelope(g);
    NlsStepper st(g, Branch::plus, s);
    const int n = static_cast<int>(std::lround(1.0 / dt));
    for (int i = 0; i < n; ++i) st.advance(a, dt);
    return a;
  };
  const EnvelopeField ref = run(0.1 / 8);
  const double e1 = max_diff(run(0.1).view(), ref.view());
  const double e2 = max_diff(run(0.05).view(), ref.view());
  // Richardson-corrected ratio: errors against dt/8 carry a 1/64 contamination
  const double ratio = (e1 - e1 / 64) / (e2 - e2 / 16);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("envelope trajectories") {
  const PhysicalSetup s = PhysicalSetup::make(0.01, 1.0, 1.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 256);

  SUBCASE("zero stays zero") {
    const EnvelopeTrajectory t = envelope_trajectory(Branch::plus, s, EnvelopeField(g, 0.0), 0.1, 5);
    for (const auto& snap : t.snapshots) CHECK(max_norm(snap) == 0.0);
  }
  SUBCASE("snapshot bookkeeping and mass") {
    const EnvelopeField a0 = gaussian_envelope(g);
    const EnvelopeTrajectory t = envelope_trajectory(Branch::plus, s, a0, 0.05, 20);
    CHECK(t.first_step == -1);
    CHECK(t.last_step() == 20);
    CHECK(t.at_step(0).time == 0.0);
    CHECK(t.at_time(0.5).time == doctest::Approx(0.5));
    CHECK(t.at_step(-1).time == doctest::Approx(-0.05));
    CHECK(max_diff(t.at_step(0).view(), a0.view()) == 0.0);
    CHECK(t.self_convergence <= 1e-8);
    const double m0 = l2(a0);
    for (const auto& snap : t.snapshots) CHECK(std::abs(l2(snap) - m0) <= 1e-8 * m0);
    CHECK_THROWS_AS(t.at_step(21), Error);
    CHECK_THROWS_AS(t.at_time(0.123), Error);
    // the backward snapshot steps forward onto the initial value
    EnvelopeField back = t.at_step(-1);
    NlsStepper st(g, Branch::plus, s);
    const auto sub = static_cast<int>(std::lround(0.05 / t.internal_dt));
    for (int i = 0; i < sub; ++i) st.step(back.view(), t.internal_dt);
    CHECK(max_diff(back.view(), a0.view()) <= 1e-13);
  }
}

TEST_CASE("dominant term") {
  const PhysicalSetup s = PhysicalSetup::make(0.01, 1.0, 1.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 64);
  const EnvelopeField a = gaussian_envelope(g);
  const WaveField A0 = dominant_term(a, 0.0, Branch::plus, s);
  const std::vector<cplx> car = carrier(g, s);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(A0[j] - a[j] * car[j]) <= 1e-16);
    CHECK(std::abs(car[j] - std::polar(1.0, g.node(j) / 0.01)) <= 1e-12);
  }
  const double tau = 0.013;
  const WaveField A1 = dominant_term(a, tau, Branch::plus, s);
  const WaveField M1 = dominant_term(a, tau, Branch::minus, s);
  const cplx step = std::polar(1.0, s.phase_rate() * tau / 1e-4);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(A1[j]) == doctest::Approx(std::abs(a[j])).epsilon(1e-15));
    CHECK(std::abs(A1[j] - A0[j] * step) <= 1e-12);
    CHECK(std::abs(M1[j] - A0[j] * std::conj(step)) <= 1e-12);
  }
}

TEST_CASE("u_app at t = 0 is the initial datum") {
  const PhysicalSetup s = PhysicalSetup::make(0.05, 1.0, 1.0, 1.0);
  const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 128);
  const auto [ap, am] = nls_initial_envelopes(InitialProfiles::gaussian(), g, s.omega);
  const EnvelopeTrajectory tp = envelope_trajectory(Branch::plus, s, ap, 0.1, 2);
  const EnvelopeTrajectory tm = envelope_trajectory(Branch::minus, s, am, 0.1, 2);
  const std::vector<double> x = g.nodes();
  const std::vector<cplx> u = u_app(tp, tm, s, 0.0, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const cplx u0 = std::exp(-x[j] * x[j]) * ReducedAngle::from_value(x[j] / 0.05).phasor();
    CHECK(std::abs(u[j] - u0) <= 1e-12);
  }
  // with no left-moving part the modulus is that of the right-moving envelope
  const auto [rp, rm] = nls_initial_envelopes(InitialProfiles::right_moving(s.omega), g, s.omega);
  const EnvelopeTrajectory trp = envelope_trajectory(Branch::plus, s, rp, 0.1, 3);
  const EnvelopeTrajectory trm = envelope_trajectory(Branch::minus, s, rm, 0.1, 3);
  const double t = 0.3;
  const double shift = s.c_g * t / 0.05;
  const std::vector<double> probe{shift, shift + 0.5};
  const std::vector<cplx> ur = u_app(trp, trm, s, t, probe);
  const TrigInterpolant ip(trp.at_time(t));
  CHECK(std::abs(std::abs(ur[0]) - std::abs(ip(0.0))) <= 1e-12);
  CHECK(std::abs(std::abs(ur[1]) - std::abs(ip(0.5))) <= 1e-12);
}

TEST_CASE("Klein-Gordon reference") {
  SUBCASE("zero data") {
    const PhysicalSetup s = PhysicalSetup::make(1.0, 1.0, 1.0, 1.0);
    const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 32);
    const KgState st = kg_reference(s, InitialProfiles::zero(), g, 0.01, 0.5);
    CHECK(max_norm(st.u) == 0.0);
    CHECK(max_norm(st.p) == 0.0);
  }
  SUBCASE("single linear mode rotates exactly") {
    const PhysicalSetup s = PhysicalSetup::make(0.5, 1.0, 0.0, 1.0);
    const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 32);
    const double k = g.wavenumber(2);
    const double om = std::sqrt(k * k + 4.0) / 0.5;
    KgState st{WaveField(g, 0.0), WaveField(g, 0.0)};
    for (std::size_t j = 0; j < 32; ++j) st.u[j] = std::polar(1.0, k * g.node(j));
    KgStepper stepper(g, s);
    stepper.advance(st, 0.7, 0.01);
    for (std::size_t j = 0; j < 32; ++j) {
      const cplx e = std::polar(1.0, k * g.node(j));
      CHECK(std::abs(st.u[j] - e * std::cos(om * 0.7)) <= 1e-12);
      CHECK(std::abs(st.p[j] + e * 0.25 * om * std::sin(om * 0.7)) <= 1e-12);
      // mode energy |p|^2 / eps^4 + om^2 |u|^2 is conserved
      const double energy = std::norm(st.p[j]) / 0.0625 + om * om * std::norm(st.u[j]);
      CHECK(energy == doctest::Approx(om * om).epsilon(1e-12));
    }
  }
  SUBCASE("second-order self-convergence") {
    const PhysicalSetup s = PhysicalSetup::make(1.0, 1.0, 1.0, 1.0);
    const PeriodicGrid g = PeriodicGrid::from_length(-4.0, 8.0, 128);
    const auto run = [&](double dt) {
      return kg_reference(s, InitialProfiles::gaussian(), g, dt, 1.0);
    };
    const KgState ref = run(0.1 / 8);
    const double e1 = max_diff(run(0.1).u.view(), ref.u.view());
    const double e2 = max_diff(run(0.05).u.view(), ref.u.view());
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  }
}
