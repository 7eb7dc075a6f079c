#include "ffkg/scheme.hpp"

#include <cmath>
#include <string>

#include "ffkg/error.hpp"

namespace ffkg {

namespace {

bool all_finite(std::span<const cplx> v) {
  for (const cplx& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_same_grid(const PeriodicGrid& a, const PeriodicGrid& b) {
  if (!a.same_as(b)) throw Error(ErrorCode::GridMismatch, "levels live on different grids");
}

}  // namespace

SchemeCoefficients build_coefficients(const PhysicalSetup& setup, const FilterParams& params,
                                      const PeriodicGrid& grid, const CoefficientOptions& opts) {
  if (std::abs(grid.h() - params.h) > 1e-12 * params.h) {
    throw Error(ErrorCode::GridMismatch, "grid spacing differs from the solved h");
  }
  const StabilityReport stab = check_stability(setup, params);
  if (opts.strict && !stab.satisfied) {
    throw Error(ErrorCode::UnstableParameters,
                "stability bound violated: lhs = " + std::to_string(stab.lhs));
  }

  const double eps = setup.epsilon;
  const double eps2 = eps * eps;
  const double tau = params.tau;
  const double h = params.h;
  const double mu = params.mu;
  const FilterValues f = evaluate_filters(params.alpha, params.beta);

  SchemeCoefficients c;
  c.grid = grid;
  c.params = params;
  c.stable = stab.satisfied;
  c.sinc_alpha = f.sinc_a;
  c.stencil.c_tt = eps2 * eps2 / (tau * tau * f.psi1_a);
  c.stencil.c_mix = 2.0 * eps2 * eps * mu / (4.0 * f.sinc_a * f.sinc_b * tau * h);
  c.stencil.c_xx = eps2 * (mu * mu - 1.0) / (h * h * f.psi2_b);
  c.stencil.c_nl = eps2 * setup.lambda / (f.tanc_b * f.tanc_b);
  c.stencil.phi1 = f.phi1_a;
  c.stencil.phi2 = f.phi2_b;

  const double omega_s = (params.branch == Branch::minus) ? -setup.omega : setup.omega;
  c.velocity_prefactor = -omega_s / (setup.kappa * mu - omega_s);

  c.divisor.resize(grid.size());
  const double scale = std::abs(c.stencil.c_tt) + 2.0 * std::abs(c.stencil.c_mix);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(grid.size());
    c.divisor[k] = cplx{c.stencil.c_tt, -2.0 * c.stencil.c_mix * std::sin(theta)};
    if (std::abs(c.divisor[k]) <= 1e-14 * scale) {
      throw Error(ErrorCode::SingularMode, "mode " + std::to_string(k) + " has a zero divisor");
    }
  }
  return c;
}

SchemeStepper::SchemeStepper(SchemeCoefficients coeffs)
    : coeffs_(std::move(coeffs)), fft_(coeffs_.grid.size()), rhs_(coeffs_.grid.size()) {
  backward_divisor_.resize(coeffs_.divisor.size());
  for (std::size_t k = 0; k < coeffs_.divisor.size(); ++k) {
    backward_divisor_[k] = std::conj(coeffs_.divisor[k]);
  }
}

WaveField SchemeStepper::solve(const WaveField& a, const WaveField& b, double time,
                               bool backward, bool serial) {
  require_same_grid(a.grid, coeffs_.grid);
  require_same_grid(b.grid, coeffs_.grid);
  kernels::Stencil s = coeffs_.stencil;
  if (backward) s.c_mix = -s.c_mix;
  const std::vector<cplx>& divisor = backward ? backward_divisor_ : coeffs_.divisor;

  if (serial) {
    kernels::assemble_rhs_serial(s, a.view(), b.view(), rhs_);
  } else {
    kernels::assemble_rhs_omp(s, a.view(), b.view(), rhs_);
  }
  fft_.forward(rhs_);
  if (serial) {
    kernels::divide_modes_serial(rhs_, divisor);
  } else {
    kernels::divide_modes_omp(rhs_, divisor);
  }
  fft_.backward(rhs_);
  const double inv_m = 1.0 / static_cast<double>(rhs_.size());
  WaveField out(coeffs_.grid, time);
  for (std::size_t j = 0; j < rhs_.size(); ++j) out[j] = rhs_[j] * inv_m;
  return out;
}

WaveField SchemeStepper::next(const WaveField& prev, const WaveField& cur) {
  return solve(prev, cur, cur.time + coeffs_.params.tau, false, false);
}

WaveField SchemeStepper::next_serial(const WaveField& prev, const WaveField& cur) {
  return solve(prev, cur, cur.time + coeffs_.params.tau, false, true);
}

WaveField SchemeStepper::previous(const WaveField& cur, const WaveField& next) {
  return solve(next, cur, cur.time - coeffs_.params.tau, true, false);
}

void SchemeStepper::step(BranchState& s) {
  WaveField n = next(s.prev, s.cur);
  s.prev = std::move(s.cur);
  s.cur = std::move(n);
  ++s.n;
}

std::vector<cplx> scheme_residual(const SchemeCoefficients& coeffs, const WaveField& prev,
                                  const WaveField& cur, const WaveField& next) {
  require_same_grid(prev.grid, cur.grid);
  require_same_grid(next.grid, cur.grid);
  std::vector<cplx> out(cur.size());
  kernels::scheme_residual_omp(coeffs.stencil, prev.view(), cur.view(), next.view(), out);
  return out;
}

std::pair<WaveField, WaveField> startup(Branch branch, const EnvelopeField& envelope0,
                                        const PhysicalSetup& setup, const FilterParams& params) {
  if (branch == Branch::zero) {
    throw Error(ErrorCode::InvalidArgument, "the zero branch starts from the full initial data");
  }
  const std::vector<cplx> car = carrier(envelope0.grid, setup);
  const EnvelopeField a1 = nls_strang_step(envelope0, params.tau, branch, setup);
  const cplx phase = params.alpha.phasor();
  WaveField w0(envelope0.grid, 0.0);
  WaveField w1(envelope0.grid, params.tau);
  for (std::size_t j = 0; j < car.size(); ++j) {
    w0[j] = envelope0[j] * car[j];
    w1[j] = a1[j] * car[j] * phase;
  }
  return {std::move(w0), std::move(w1)};
}

std::pair<WaveField, WaveField> startup_zero(const InitialProfiles& profiles,
                                             const PeriodicGrid& grid, const PhysicalSetup& setup,
                                             const FilterParams& params, double dt_ref) {
  KgState s = kg_initial_state(profiles, grid, setup);
  WaveField w0 = s.u;
  KgStepper stepper(grid, setup);
  stepper.advance(s, params.tau, dt_ref);
  return {std::move(w0), std::move(s.u)};
}

WaveField velocity(const WaveField& prev, const WaveField& next,
                   const SchemeCoefficients& coeffs) {
  require_same_grid(prev.grid, next.grid);
  const double scale =
      coeffs.velocity_prefactor / (2.0 * coeffs.params.tau * coeffs.sinc_alpha);
  WaveField v(prev.grid, 0.5 * (prev.time + next.time));
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = scale * (next[j] - prev[j]);
  return v;
}

BranchTrajectory run_branch(const SchemeCoefficients& coeffs, WaveField w0, WaveField w1,
                            std::int64_t n_steps) {
  if (n_steps < 0) throw Error(ErrorCode::InvalidArgument, "negative step count");
  BranchTrajectory traj;
  traj.branch = coeffs.params.branch;
  traj.params = coeffs.params;
  SchemeStepper stepper(coeffs);

  const auto levels = static_cast<std::size_t>(n_steps + 2);
  traj.w.reserve(levels);
  traj.w.push_back(std::move(w0));
  traj.w.push_back(std::move(w1));
  while (traj.w.size() < levels) {
    const std::size_t n = traj.w.size() - 1;
    WaveField next = stepper.next(traj.w[n - 1], traj.w[n]);
    if (!all_finite(next.view())) {
      throw Error(ErrorCode::NonFinite,
                  "level " + std::to_string(n + 1) + " of the " +
                      to_string(traj.branch) + " branch overflowed");
    }
    traj.w.push_back(std::move(next));
  }

  const WaveField before = stepper.previous(traj.w[0], traj.w[1]);
  traj.v.reserve(static_cast<std::size_t>(n_steps + 1));
  traj.v.push_back(velocity(before, traj.w[1], coeffs));
  for (std::size_t n = 1; n <= static_cast<std::size_t>(n_steps); ++n) {
    traj.v.push_back(velocity(traj.w[n - 1], traj.w[n + 1], coeffs));
  }
  // With no steps the run is the single level w^0; w^1 only fed v^0.
  if (n_steps == 0) traj.w.resize(1);
  return traj;
}

double separation_time(const PhysicalSetup& setup, double period) {
  return setup.epsilon * period / (2.0 * setup.c_g);
}

namespace {

// carrier * I(w * conj(carrier)) at xi, or zero outside the cell.
class BranchEvaluator {
 public:
  BranchEvaluator(const WaveField& w, const PhysicalSetup& setup)
      : grid_(w.grid), k_(setup.kappa / setup.epsilon), interp_(w.grid, demodulate(w, setup)) {}

  cplx operator()(double xi) const {
    if (!grid_.contains(xi)) return {};
    return interp_(xi) * ReducedAngle::from_value(k_ * xi).phasor();
  }

 private:
  static std::vector<cplx> demodulate(const WaveField& w, const PhysicalSetup& setup) {
    const std::vector<cplx> car = carrier(w.grid, setup);
    std::vector<cplx> out(w.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = w[j] * std::conj(car[j]);
    return out;
  }

  PeriodicGrid grid_;
  double k_;
  TrigInterpolant interp_;
};

}  // namespace

Combined combine(const BranchTrajectory& plus, const BranchTrajectory& minus, std::int64_t n,
                 const PhysicalSetup& setup, std::span<const double> x) {
  if (n < 0 || n > plus.steps() || n > minus.steps()) {
    throw Error(ErrorCode::GridMismatch, "step outside the branch trajectories");
  }
  const auto i = static_cast<std::size_t>(n);
  const double t = plus.w[i].time;
  if (std::abs(minus.w[i].time - t) > 1e-12 * std::max(1.0, t)) {
    throw Error(ErrorCode::GridMismatch, "branch levels are at different times");
  }
  const double shift = setup.c_g * t / setup.epsilon;

  const BranchEvaluator up(plus.w[i], setup);
  const BranchEvaluator um(minus.w[i], setup);
  const BranchEvaluator vp(plus.v[i], setup);
  const BranchEvaluator vm(minus.v[i], setup);

  Combined out;
  out.separated = t >= separation_time(setup, plus.grid().length());
  out.u.resize(x.size());
  out.v.resize(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double xp = x[q] - shift;
    const double xm = x[q] + shift;
    out.u[q] = up(xp) + um(xm);
    out.v[q] = vp(xp) + vm(xm);
  }
  return out;
}

}  // namespace ffkg
