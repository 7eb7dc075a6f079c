#include "ffkg/analysis.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "ffkg/error.hpp"

namespace ffkg {

ModeAnalysis amplification(double theta, const PhysicalSetup& setup, const FilterParams& params) {
  const double eps = setup.epsilon;
  const double tau = params.tau;
  const double h = params.h;
  const double mu = params.mu;
  const FilterValues f = evaluate_filters(params.alpha, params.beta);

  ModeAnalysis m;
  m.theta = theta;
  m.c1 = mu * tau * std::sin(theta) * f.psi1_a / (eps * h * f.sinc_a * f.sinc_b);
  m.c2 = 2.0 * tau * tau * (mu * mu - 1.0) * (std::cos(theta) - f.phi2_b) * f.psi1_a /
             (eps * eps * h * h * f.psi2_b) +
         tau * tau * f.psi1_a / (eps * eps * eps * eps);

  const cplx one_minus{1.0, -m.c1};
  const cplx one_plus{1.0, m.c1};
  const double b = 2.0 * f.phi1_a - m.c2;
  m.G[0][0] = b / one_minus;
  m.G[0][1] = -one_plus / one_minus;
  m.G[1][0] = 1.0;
  m.G[1][1] = 0.0;

  const double disc = b * b - 4.0 * (1.0 + m.c1 * m.c1);
  const cplx root = disc < 0.0 ? cplx{0.0, std::sqrt(-disc)} : cplx{std::sqrt(disc), 0.0};
  m.lambda_plus = (b + root) / (2.0 * one_minus);
  m.lambda_minus = (b - root) / (2.0 * one_minus);

  m.q = std::abs(b) / (2.0 * std::sqrt(1.0 + m.c1 * m.c1));
  if (m.q < 1.0) {
    m.norm_P = std::sqrt(2.0 * (1.0 + m.q));
    m.norm_P_inv = 1.0 / std::sqrt(2.0 * (1.0 - m.q));
    m.cond_P = std::sqrt((1.0 + m.q) / (1.0 - m.q));
  } else {
    m.norm_P = m.norm_P_inv = m.cond_P = std::numeric_limits<double>::infinity();
  }
  return m;
}

ModeAnalysis amplification(std::size_t slot, const PeriodicGrid& grid, const PhysicalSetup& setup,
                           const FilterParams& params) {
  const double theta = 2.0 * kPi * static_cast<double>(slot) / static_cast<double>(grid.size());
  return amplification(theta, setup, params);
}

std::array<cplx, 2> apply(const Matrix2& g, const std::array<cplx, 2>& x) {
  return {g[0][0] * x[0] + g[0][1] * x[1], g[1][0] * x[0] + g[1][1] * x[1]};
}

namespace {

void require_same_period(const PeriodicGrid& a, const PeriodicGrid& b) {
  const double tol = 1e-12 * std::max(1.0, a.length());
  if (std::abs(a.length() - b.length()) > tol || std::abs(a.x_min() - b.x_min()) > tol) {
    throw Error(ErrorCode::GridMismatch, "grids do not share period and origin");
  }
}

std::vector<cplx> envelope_on(const EnvelopeTrajectory& env, std::int64_t n,
                              const PeriodicGrid& grid) {
  const EnvelopeField& a = env.at_step(n);
  require_same_period(a.grid, grid);
  return resample(a.grid, a.view(), grid);
}

}  // namespace

WaveField dominant_on_grid(const EnvelopeTrajectory& env, std::int64_t n, const PeriodicGrid& grid,
                           const PhysicalSetup& setup, const FilterParams& params) {
  const std::vector<cplx> a = envelope_on(env, n, grid);
  const std::vector<cplx> car = carrier(grid, setup);
  const cplx phase = params.alpha.times(n).phasor();
  WaveField out(grid, static_cast<double>(n) * params.tau);
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] * car[j] * phase;
  return out;
}

ErrorReport error_report(const WaveField& w, const WaveField& v, const EnvelopeTrajectory& env,
                         std::int64_t n, const PhysicalSetup& setup, const FilterParams& params) {
  if (params.branch == Branch::zero) {
    throw Error(ErrorCode::InvalidArgument, "the zero branch has no envelope reference");
  }
  if (!w.grid.same_as(v.grid)) throw Error(ErrorCode::GridMismatch, "w and v grids differ");
  const WaveField A = dominant_on_grid(env, n, w.grid, setup, params);
  const double eps2 = setup.epsilon * setup.epsilon;
  const cplx expected_rate{0.0, params.branch == Branch::minus ? setup.omega : -setup.omega};

  std::vector<cplx> du(w.size());
  double dv = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    du[j] = w[j] - A[j];
    dv = std::max(dv, std::abs(eps2 * v[j] - expected_rate * A[j]));
  }
  ErrorReport rep;
  rep.err_linf = max_norm(du);
  rep.err_wiener = wiener_norm(w.grid, du);
  rep.err_velocity = dv;
  rep.t = static_cast<double>(n) * params.tau;
  rep.step = n;
  return rep;
}

ErrorReport kg_error_report(const WaveField& w, const WaveField& v, const KgState& ref,
                            const PhysicalSetup& setup) {
  if (!w.grid.same_as(v.grid)) throw Error(ErrorCode::GridMismatch, "w and v grids differ");
  require_same_period(ref.u.grid, w.grid);
  const std::vector<cplx> u = resample(ref.u.grid, ref.u.view(), w.grid);
  const std::vector<cplx> p = resample(ref.p.grid, ref.p.view(), w.grid);
  const double eps2 = setup.epsilon * setup.epsilon;
  std::vector<cplx> du(w.size());
  double dv = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    du[j] = w[j] - u[j];
    dv = std::max(dv, std::abs(eps2 * v[j] - p[j]));
  }
  ErrorReport rep;
  rep.err_linf = max_norm(du);
  rep.err_wiener = wiener_norm(w.grid, du);
  rep.err_velocity = dv;
  rep.t = w.time;
  return rep;
}

WaveField defect(const EnvelopeTrajectory& env, std::int64_t n, const PhysicalSetup& setup,
                 const FilterParams& params, const PeriodicGrid& grid) {
  const SchemeCoefficients c = build_coefficients(setup, params, grid);
  const kernels::Stencil& s = c.stencil;
  const std::vector<cplx> am = envelope_on(env, n - 1, grid);
  const std::vector<cplx> a0 = envelope_on(env, n, grid);
  const std::vector<cplx> ap = envelope_on(env, n + 1, grid);
  const std::vector<cplx> car = carrier(grid, setup);
  const cplx ph_m = params.alpha.times(n - 1).phasor();
  const cplx ph_0 = params.alpha.times(n).phasor();
  const cplx ph_p = params.alpha.times(n + 1).phasor();
  const cplx right = params.beta.phasor();
  const cplx left = std::conj(right);

  const std::size_t m = grid.size();
  WaveField d(grid, static_cast<double>(n) * params.tau);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t jl = j == 0 ? m - 1 : j - 1;
    const std::size_t jr = j + 1 == m ? 0 : j + 1;
    const cplx cj = car[j];
    const cplx A0 = a0[j] * cj * ph_0;
    const cplx Ap = ap[j] * cj * ph_p;
    const cplx Am = am[j] * cj * ph_m;
    const cplx A0r = a0[jr] * cj * right * ph_0;
    const cplx A0l = a0[jl] * cj * left * ph_0;
    const cplx dr = (ap[jr] * ph_p - am[jr] * ph_m) * cj * right;
    const cplx dl = (ap[jl] * ph_p - am[jl] * ph_m) * cj * left;
    d[j] = s.c_tt * (Ap - 2.0 * s.phi1 * A0 + Am) - s.c_mix * (dr - dl) +
           s.c_xx * (A0r - 2.0 * s.phi2 * A0 + A0l) + c.c_pot * A0 +
           s.c_nl * std::norm(A0) * A0;
  }
  return d;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  if (n < 2 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (dn * sxy - sx * sy) / den;
}

StudyRow study_row(const StudyConfig& cfg, double epsilon, double h_target) {
  StudyRow row;
  row.epsilon = epsilon;
  row.h_target = h_target;
  try {
    const PhysicalSetup setup = PhysicalSetup::make(epsilon, cfg.kappa, cfg.lambda, cfg.t_final);
    const BetaSolution beta = solve_beta(epsilon, cfg.rho, cfg.kappa, h_target);
    const double tau_target = cfg.tau_factor * beta.h * beta.h;
    const FilterParams params =
        solve_params(setup, cfg.rho, cfg.r, h_target, tau_target).for_branch(cfg.branch, setup);
    row.params = params;

    const StabilityReport stab = check_stability(setup, params);
    row.stab_lhs = stab.lhs;
    if (!stab.satisfied) {
      row.skipped = true;
      row.reason = "stability bound violated";
      return row;
    }

    const PeriodicGrid grid = PeriodicGrid::fitted(cfg.x_min, cfg.x_max - cfg.x_min, params.h);
    const auto n = std::max<std::int64_t>(1, std::llround(cfg.t_final / params.tau));
    row.nodes = grid.size();
    row.steps = n;

    const PeriodicGrid env_grid =
        PeriodicGrid::from_length(grid.x_min(), grid.length(), cfg.reference_modes);
    auto env0 = nls_initial_envelopes(cfg.profiles, env_grid, setup.omega);
    const EnvelopeField& start = cfg.branch == Branch::minus ? env0.second : env0.first;
    const EnvelopeTrajectory traj =
        envelope_trajectory(cfg.branch, setup, start, params.tau, n, cfg.trajectory);
    row.reference_self_convergence = traj.self_convergence;

    auto grid0 = nls_initial_envelopes(cfg.profiles, grid, setup.omega);
    const EnvelopeField& a0 = cfg.branch == Branch::minus ? grid0.second : grid0.first;
    const SchemeCoefficients coeffs = build_coefficients(setup, params, grid);
    auto [w0, w1] = startup(cfg.branch, a0, setup, params);
    const BranchTrajectory bt = run_branch(coeffs, std::move(w0), std::move(w1), n);
    const auto last = static_cast<std::size_t>(n);
    row.error = error_report(bt.w[last], bt.v[last], traj, n, setup, params);
  } catch (const Error& e) {
    row.skipped = true;
    row.reason = e.what();
  }
  return row;
}

std::vector<StudyRow> convergence_study(const StudyConfig& cfg) {
  std::vector<StudyRow> rows(cfg.epsilons.size() * cfg.h_targets.size());
  const auto total = static_cast<std::ptrdiff_t>(rows.size());
  const std::size_t nh = cfg.h_targets.size();
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto u = static_cast<std::size_t>(i);
    rows[u] = study_row(cfg, cfg.epsilons[u / nh], cfg.h_targets[u % nh]);
  }

  for (std::size_t e = 0; e < cfg.epsilons.size(); ++e) {
    std::vector<double> h, el, ev;
    for (std::size_t k = 0; k < nh; ++k) {
      const StudyRow& r = rows[e * nh + k];
      if (r.skipped) continue;
      h.push_back(r.params.h);
      el.push_back(r.error.err_linf);
      ev.push_back(r.error.err_velocity);
    }
    const double sl = loglog_slope(h, el);
    const double sv = loglog_slope(h, ev);
    for (std::size_t k = 0; k < nh; ++k) {
      rows[e * nh + k].slope_linf = sl;
      rows[e * nh + k].slope_velocity = sv;
    }
  }
  return rows;
}

namespace {

void leapfrog_row(const LeapfrogConfig& cfg, const PhysicalSetup& setup,
                  const PeriodicGrid& ref_grid, LeapfrogRow& row, std::size_t nodes) {
  const PeriodicGrid grid = PeriodicGrid::from_length(cfg.x_min, cfg.x_max - cfg.x_min, nodes);
  const double h = grid.h();
  const auto n =
      std::max<std::int64_t>(1, std::llround(cfg.t_final / (cfg.tau_factor * h * h)));
  const double tau = cfg.t_final / static_cast<double>(n);
  const FilterParams params = direct_params(setup, tau, h, cfg.r, Branch::zero);
  const SchemeCoefficients coeffs = build_coefficients(setup, params, grid);
  auto [w0, w1] = startup_zero(cfg.profiles, grid, setup, params, cfg.reference_dt);
  const BranchTrajectory bt = run_branch(coeffs, std::move(w0), std::move(w1), n);
  const KgState ref = kg_reference(setup, cfg.profiles, ref_grid, cfg.reference_dt,
                                   static_cast<double>(n) * tau);
  const auto last = static_cast<std::size_t>(n);

  row.h = h;
  row.tau = tau;
  row.nodes = grid.size();
  row.steps = n;
  row.stab_lhs = check_stability(setup, params).lhs;
  row.error = kg_error_report(bt.w[last], bt.v[last], ref, setup);
  row.error.step = n;
}

}  // namespace

std::vector<LeapfrogRow> leapfrog_study(const LeapfrogConfig& cfg) {
  const PhysicalSetup setup = PhysicalSetup::make(cfg.epsilon, cfg.kappa, cfg.lambda, cfg.t_final);
  const PeriodicGrid ref_grid =
      PeriodicGrid::from_length(cfg.x_min, cfg.x_max - cfg.x_min, cfg.reference_modes);

  std::vector<LeapfrogRow> rows(cfg.node_counts.size());
  const auto total = static_cast<std::ptrdiff_t>(rows.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      leapfrog_row(cfg, setup, ref_grid, rows[u], cfg.node_counts[u]);
    } catch (...) {
#pragma omp critical(ffkg_leapfrog_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> h, e, ev;
  for (const auto& r : rows) {
    h.push_back(r.h);
    e.push_back(r.error.err_linf);
    ev.push_back(r.error.err_velocity);
  }
  const double slope = loglog_slope(h, e);
  const double slope_v = loglog_slope(h, ev);
  for (auto& r : rows) {
    r.slope_linf = slope;
    r.slope_velocity = slope_v;
  }
  return rows;
}

}  // namespace ffkg
