#include "ffkg/reference.hpp"

#include <cmath>
#include <string>

#include "ffkg/error.hpp"
#include "ffkg/kernels.hpp"

namespace ffkg {

InitialProfiles InitialProfiles::gaussian() {
  return {[](double x) { return cplx{std::exp(-x * x), 0.0}; },
          [](double x) { return cplx{0.0, std::exp(-x * x)}; }};
}

InitialProfiles InitialProfiles::zero() {
  return {[](double) { return cplx{}; }, [](double) { return cplx{}; }};
}

InitialProfiles InitialProfiles::right_moving(double omega) {
  return {[](double x) { return cplx{std::exp(-x * x), 0.0}; },
          [omega](double x) { return cplx{0.0, -omega} * std::exp(-x * x); }};
}

std::pair<EnvelopeField, EnvelopeField> nls_initial_envelopes(const InitialProfiles& profiles,
                                                              const PeriodicGrid& grid,
                                                              double omega) {
  EnvelopeField plus(grid, 0.0);
  EnvelopeField minus(grid, 0.0);
  const cplx i_over_omega{0.0, 1.0 / omega};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    const cplx a0 = profiles.a0(x);
    const cplx b0 = profiles.b0(x);
    plus[j] = 0.5 * (a0 + i_over_omega * b0);
    minus[j] = 0.5 * (a0 - i_over_omega * b0);
  }
  return {std::move(plus), std::move(minus)};
}

NlsStepper::NlsStepper(const PeriodicGrid& grid, Branch branch, const PhysicalSetup& setup)
    : grid_(grid),
      sign_(branch == Branch::minus ? -1.0 : 1.0),
      disp_((1.0 - setup.c_g * setup.c_g) / (2.0 * setup.omega)),
      nl_rate_(setup.lambda / (2.0 * setup.omega)),
      fft_(grid.size()),
      k2_(grid.size()),
      multiplier_(grid.size()) {
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double kk = grid.wavenumber(k);
    k2_[k] = kk * kk;
  }
}

void NlsStepper::step(std::span<cplx> a, double dt) {
  if (dt != cached_dt_) {
    const double inv_m = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t k = 0; k < k2_.size(); ++k) {
      multiplier_[k] = std::polar(inv_m, -sign_ * disp_ * k2_[k] * dt);
    }
    cached_dt_ = dt;
  }
  const double half_rate = -sign_ * nl_rate_ * 0.5 * dt;
  kernels::cubic_phase_omp(a, half_rate);
  fft_.forward(a);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= multiplier_[k];
  fft_.backward(a);
  kernels::cubic_phase_omp(a, half_rate);
}

void NlsStepper::advance(EnvelopeField& a, double dt) {
  step(a.view(), dt);
  a.time += dt;
}

EnvelopeField nls_strang_step(const EnvelopeField& a, double dt, Branch branch,
                              const PhysicalSetup& setup) {
  EnvelopeField out = a;
  NlsStepper stepper(a.grid, branch, setup);
  stepper.advance(out, dt);
  return out;
}

const EnvelopeField& EnvelopeTrajectory::at_step(std::int64_t n) const {
  if (n < first_step || n > last_step()) {
    throw Error(ErrorCode::GridMismatch, "step " + std::to_string(n) + " outside trajectory");
  }
  return snapshots[static_cast<std::size_t>(n - first_step)];
}

const EnvelopeField& EnvelopeTrajectory::at_time(double t) const {
  const double x = t / tau;
  const auto n = static_cast<std::int64_t>(std::llround(x));
  if (std::abs(x - static_cast<double>(n)) > 1e-9) {
    throw Error(ErrorCode::GridMismatch, "time " + std::to_string(t) + " is not a snapshot time");
  }
  return at_step(n);
}

namespace {

void check_finite(std::span<const cplx> v, const char* what) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::NonFinite, std::string(what) + " produced a non-finite value");
    }
  }
}

EnvelopeTrajectory run_trajectory(Branch branch, const PhysicalSetup& setup,
                                  const EnvelopeField& initial, double tau, std::int64_t last_step,
                                  std::int64_t substeps) {
  EnvelopeTrajectory traj;
  traj.branch = branch;
  traj.tau = tau;
  traj.first_step = -1;
  traj.internal_dt = tau / static_cast<double>(substeps);
  traj.snapshots.resize(static_cast<std::size_t>(last_step + 2));

  NlsStepper stepper(initial.grid, branch, setup);
  const double dt = traj.internal_dt;

  EnvelopeField back = initial;
  for (std::int64_t s = 0; s < substeps; ++s) stepper.step(back.view(), -dt);
  back.time = -tau;
  check_finite(back.view(), "envelope trajectory");
  traj.snapshots[0] = std::move(back);

  EnvelopeField a = initial;
  a.time = 0.0;
  traj.snapshots[1] = a;
  for (std::int64_t n = 1; n <= last_step; ++n) {
    for (std::int64_t s = 0; s < substeps; ++s) stepper.step(a.view(), dt);
    a.time = static_cast<double>(n) * tau;
    check_finite(a.view(), "envelope trajectory");
    traj.snapshots[static_cast<std::size_t>(n + 1)] = a;
  }
  return traj;
}

double max_snapshot_difference(const EnvelopeTrajectory& a, const EnvelopeTrajectory& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    for (std::size_t j = 0; j < a.snapshots[i].size(); ++j) {
      d = std::max(d, std::abs(a.snapshots[i][j] - b.snapshots[i][j]));
    }
  }
  return d;
}

}  // namespace

EnvelopeTrajectory envelope_trajectory(Branch branch, const PhysicalSetup& setup,
                                       const EnvelopeField& initial, double tau,
                                       std::int64_t last_step, const TrajectoryOptions& opts) {
  if (!(tau > 0.0) || last_step < 0) {
    throw Error(ErrorCode::InvalidArgument, "trajectory needs tau > 0 and last_step >= 0");
  }
  auto substeps = static_cast<std::int64_t>(std::ceil(tau / opts.internal_dt - 1e-9));
  substeps = std::max<std::int64_t>(substeps, 1);

  EnvelopeTrajectory coarse = run_trajectory(branch, setup, initial, tau, last_step, substeps);
  for (int level = 0; level < opts.max_refinements; ++level) {
    EnvelopeTrajectory fine = run_trajectory(branch, setup, initial, tau, last_step, 2 * substeps);
    fine.self_convergence = max_snapshot_difference(coarse, fine);
    substeps *= 2;
    coarse = std::move(fine);
    if (coarse.self_convergence <= opts.tolerance) break;
  }
  return coarse;
}

std::vector<cplx> carrier(const PeriodicGrid& grid, const PhysicalSetup& setup) {
  std::vector<cplx> c(grid.size());
  const double k = setup.kappa / setup.epsilon;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    c[j] = ReducedAngle::from_value(k * grid.node(j)).phasor();
  }
  return c;
}

WaveField dominant_term(const EnvelopeField& a, const ReducedAngle& phase,
                        const PhysicalSetup& setup) {
  const std::vector<cplx> car = carrier(a.grid, setup);
  const cplx ph = phase.phasor();
  WaveField out(a.grid, a.time);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * car[j] * ph;
  return out;
}

WaveField dominant_term(const EnvelopeField& a, double t, Branch branch,
                        const PhysicalSetup& setup) {
  const double sign = (branch == Branch::minus) ? -1.0 : 1.0;
  const double eps2 = setup.epsilon * setup.epsilon;
  const ReducedAngle phase = ReducedAngle::from_value(sign * setup.phase_rate() * t / eps2);
  WaveField out = dominant_term(a, phase, setup);
  out.time = t;
  return out;
}

std::vector<cplx> u_app(const EnvelopeTrajectory& plus, const EnvelopeTrajectory& minus,
                        const PhysicalSetup& setup, double t, std::span<const double> x) {
  const TrigInterpolant ip(plus.at_time(t));
  const TrigInterpolant im(minus.at_time(t));
  const double eps = setup.epsilon;
  const double shift = setup.c_g * t / eps;
  const double kx = setup.kappa / eps;
  const double wt = setup.omega * t / (eps * eps);
  std::vector<cplx> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const cplx wave_p = ReducedAngle::from_value(kx * x[i] - wt).phasor();
    const cplx wave_m = ReducedAngle::from_value(kx * x[i] + wt).phasor();
    out[i] = ip(x[i] - shift) * wave_p + im(x[i] + shift) * wave_m;
  }
  return out;
}

KgStepper::KgStepper(const PeriodicGrid& grid, const PhysicalSetup& setup)
    : grid_(grid),
      setup_(setup),
      fft_(grid.size()),
      freq_(grid.size()),
      cos_(grid.size()),
      sin_(grid.size()),
      uh_(grid.size()),
      ph_(grid.size()) {
  const double eps = setup.epsilon;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double kk = grid.wavenumber(k);
    freq_[k] = std::sqrt(kk * kk + 1.0 / (eps * eps)) / eps;
  }
}

void KgStepper::step(KgState& s, double dt) {
  const double eps2 = setup_.epsilon * setup_.epsilon;
  if (dt != cached_dt_) {
    for (std::size_t k = 0; k < freq_.size(); ++k) {
      cos_[k] = std::cos(freq_[k] * dt);
      sin_[k] = std::sin(freq_[k] * dt);
    }
    cached_dt_ = dt;
  }
  const double half_kick = 0.5 * dt * setup_.lambda;
  kernels::cubic_kick_omp(s.u.view(), s.p.view(), half_kick);

  std::copy(s.u.values.begin(), s.u.values.end(), uh_.begin());
  std::copy(s.p.values.begin(), s.p.values.end(), ph_.begin());
  fft_.forward(uh_);
  fft_.forward(ph_);
  const double inv_m = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t k = 0; k < freq_.size(); ++k) {
    const double om = freq_[k];
    const cplx u = uh_[k];
    const cplx p = ph_[k];
    uh_[k] = inv_m * (u * cos_[k] + p * (sin_[k] / (eps2 * om)));
    ph_[k] = inv_m * (p * cos_[k] - u * (eps2 * om * sin_[k]));
  }
  fft_.backward(uh_);
  fft_.backward(ph_);
  std::copy(uh_.begin(), uh_.end(), s.u.values.begin());
  std::copy(ph_.begin(), ph_.end(), s.p.values.begin());

  kernels::cubic_kick_omp(s.u.view(), s.p.view(), half_kick);
  s.u.time += dt;
  s.p.time += dt;
}

void KgStepper::advance(KgState& s, double duration, double max_dt) {
  if (duration == 0.0) return;
  const auto n = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::abs(duration) / max_dt - 1e-9)));
  const double dt = duration / static_cast<double>(n);
  const double t0 = s.u.time;
  for (std::int64_t i = 0; i < n; ++i) step(s, dt);
  s.u.time = s.p.time = t0 + duration;
  check_finite(s.u.view(), "Klein-Gordon reference");
}

KgState kg_initial_state(const InitialProfiles& profiles, const PeriodicGrid& grid,
                         const PhysicalSetup& setup) {
  const std::vector<cplx> car = carrier(grid, setup);
  KgState s{WaveField(grid, 0.0), WaveField(grid, 0.0)};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    s.u[j] = profiles.a0(x) * car[j];
    s.p[j] = profiles.b0(x) * car[j];
  }
  return s;
}

KgState kg_reference(const PhysicalSetup& setup, const InitialProfiles& profiles,
                     const PeriodicGrid& grid, double dt_ref, double t_end) {
  KgState s = kg_initial_state(profiles, grid, setup);
  KgStepper stepper(grid, setup);
  stepper.advance(s, t_end, dt_ref);
  return s;
}

}  // namespace ffkg
