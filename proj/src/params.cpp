#include "ffkg/params.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ffkg/error.hpp"

namespace ffkg {

const char* to_string(Branch b) noexcept {
  switch (b) {
    case Branch::plus: return "plus";
    case Branch::minus: return "minus";
    case Branch::zero: return "zero";
  }
  return "?";
}

Dispersion derive_dispersion(double kappa) {
  if (kappa == 0.0) throw Error(ErrorCode::ZeroWaveVector, "kappa must be nonzero");
  const double omega = std::sqrt(1.0 + kappa * kappa);
  return {omega, kappa / omega};
}

PhysicalSetup PhysicalSetup::make(double epsilon, double kappa, double lambda, double t_final) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");
  }
  if (!(t_final > 0.0)) throw Error(ErrorCode::InvalidArgument, "final time must be positive");
  const Dispersion d = derive_dispersion(kappa);
  PhysicalSetup s;
  s.epsilon = epsilon;
  s.kappa = kappa;
  s.lambda = lambda;
  s.t_final = t_final;
  s.omega = d.omega;
  s.c_g = d.c_g;
  return s;
}

FilterParams FilterParams::for_branch(Branch b, const PhysicalSetup& setup) const {
  FilterParams p = *this;
  const ReducedAngle plus_alpha = (branch == Branch::minus) ? -alpha : alpha;
  p.branch = b;
  switch (b) {
    case Branch::plus:
      p.mu = setup.c_g;
      p.alpha = plus_alpha;
      break;
    case Branch::minus:
      p.mu = -setup.c_g;
      p.alpha = -plus_alpha;
      break;
    case Branch::zero:
      p.mu = 0.0;
      p.alpha = plus_alpha;
      break;
  }
  return p;
}

namespace {

struct ValueAndSlope {
  double f;
  double df;
};

// f takes an offset inside quarter-turn cell q.
using CellFunction = std::function<ValueAndSlope(std::int64_t q, double offset)>;

// Bracketed Newton with bisection fallback. Runs until the bracket collapses to
// a few ulps so the offset is accurate to rounding.
double refine_root(const CellFunction& fn, std::int64_t q, double lo, double hi, double f_lo) {
  double best_x = lo;
  double best_f = std::abs(f_lo);
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const ValueAndSlope v = fn(q, x);
    if (std::abs(v.f) < best_f) {
      best_f = std::abs(v.f);
      best_x = x;
    }
    if (v.f == 0.0) return x;
    if ((v.f < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = v.f;
    } else {
      hi = x;
    }
    const double width = hi - lo;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), 1e-300)) {
      break;
    }
    double next = x - v.f / v.df;
    if (!(v.df != 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return best_x;
}

// Positive roots of fn in cell q (angle = q pi/2 + offset, |offset| <= pi/4).
std::vector<ReducedAngle> roots_in_cell(const CellFunction& fn, std::int64_t q) {
  constexpr int kSamples = 48;
  const double half = 0.25 * kPi;
  std::vector<ReducedAngle> roots;
  double x_prev = -half;
  double f_prev = fn(q, x_prev).f;
  for (int i = 1; i <= kSamples; ++i) {
    const double x = -half + 2.0 * half * i / kSamples;
    const double f = fn(q, x).f;
    if (f_prev == 0.0) {
      roots.push_back({q, x_prev});
    } else if ((f < 0.0) != (f_prev < 0.0) && f != 0.0) {
      roots.push_back({q, refine_root(fn, q, x_prev, x, f_prev)});
    }
    x_prev = x;
    f_prev = f;
  }
  if (f_prev == 0.0) roots.push_back({q, x_prev});
  return roots;
}

// Searches cells outward from the target until the nearest strictly positive
// root is certain.
ReducedAngle nearest_positive_root(const CellFunction& fn, double target, const char* what) {
  const double quarter = 0.5 * kPi;
  const auto q0 = static_cast<std::int64_t>(std::llround(target / quarter));
  const double degenerate = 1e-9;
  std::optional<ReducedAngle> best;
  double best_dist = std::numeric_limits<double>::infinity();
  constexpr std::int64_t kMaxRadius = 4096;
  for (std::int64_t radius = 0; radius <= kMaxRadius; ++radius) {
    // every point of a cell at this radius is at least this far from target
    const double min_dist = (static_cast<double>(radius) - 0.5) * quarter;
    if (best && min_dist > best_dist) break;
    for (const std::int64_t q : {q0 - radius, q0 + radius}) {
      if (q < 0) continue;
      for (const ReducedAngle& root : roots_in_cell(fn, q)) {
        const double v = root.value();
        if (v <= degenerate) continue;
        const double dist = std::abs(v - target);
        if (dist < best_dist) {
          best_dist = dist;
          best = root;
        }
      }
      if (radius == 0) break;
    }
  }
  if (!best) {
    throw Error(ErrorCode::NoBracket,
                std::string("no positive root for ") + what + " near " + std::to_string(target));
  }
  return *best;
}

}  // namespace

BetaSolution solve_beta(double epsilon, double rho, double kappa, double h_target) {
  if (!(epsilon > 0.0) || !(rho > 0.0) || !(h_target > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "solve_beta needs epsilon, rho, h_target > 0");
  }
  if (kappa == 0.0) throw Error(ErrorCode::ZeroWaveVector, "kappa must be nonzero");
  const double sr = std::sqrt(rho);
  const double target = std::abs(kappa) * h_target / epsilon;

  // tan^2(b) = eps^2 b^2 / rho splits into sqrt(rho) sin b = +-eps b cos b;
  // both factors are smooth across the poles of tan.
  std::optional<ReducedAngle> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const double sign : {1.0, -1.0}) {
    const CellFunction fn = [=](std::int64_t q, double off) {
      const ReducedAngle b{q, off};
      const double s = b.sin();
      const double c = b.cos();
      const double v = b.value();
      return ValueAndSlope{sr * s - sign * epsilon * v * c,
                           sr * c - sign * epsilon * (c - v * s)};
    };
    try {
      const ReducedAngle root = nearest_positive_root(fn, target, "beta");
      const double dist = std::abs(root.value() - target);
      if (dist < best_dist) {
        best_dist = dist;
        best = root;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoBracket) throw;
    }
  }
  if (!best) throw Error(ErrorCode::NoBracket, "no positive root for beta");
  if (best->pole_distance() < kPoleGuard) {
    throw Error(ErrorCode::PoleProximity, "beta root lies within the tan pole guard");
  }
  ReducedAngle beta = *best;
  if (kappa < 0.0) beta = -beta;
  return {beta, std::abs(beta.value()) * epsilon / std::abs(kappa)};
}

AlphaSolution solve_alpha(const PhysicalSetup& setup, double rho, double tau_target) {
  if (rho == 0.0 || !(tau_target > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "solve_alpha needs rho != 0 and tau_target > 0");
  }
  const double eps2 = setup.epsilon * setup.epsilon;
  const double k = 3.0 * rho * setup.omega * setup.omega;
  const double target = tau_target / (setup.omega * eps2);

  // eps^2 a^2 sin a = 3 rho omega^2 (sin a - a cos a), with a = |alpha|
  const CellFunction fn = [=](std::int64_t q, double off) {
    const ReducedAngle a{q, off};
    const double s = a.sin();
    const double c = a.cos();
    const double v = a.value();
    const double smz = std::abs(v) < 1.0 ? sin_minus_zcos(v) : s - v * c;
    return ValueAndSlope{k * smz - eps2 * v * v * s, k * v * s - eps2 * (2.0 * v * s + v * v * c)};
  };
  const ReducedAngle a = nearest_positive_root(fn, target, "alpha");
  // kappa c_g - omega < 0, so alpha < 0 for a positive step
  return {-a, a.value() * eps2 * setup.omega};
}

FilterParams solve_params(const PhysicalSetup& setup, double rho, double r, double h_target,
                          double tau_target) {
  const BetaSolution b = solve_beta(setup.epsilon, rho, setup.kappa, h_target);
  const AlphaSolution a = solve_alpha(setup, rho, tau_target);
  FilterParams p;
  p.tau = a.tau;
  p.h = b.h;
  p.alpha = a.alpha;
  p.beta = b.beta;
  p.rho = rho;
  p.r = r;
  p.mu = setup.c_g;
  p.branch = Branch::plus;
  p.consistent = true;
  return p;
}

FilterParams direct_params(const PhysicalSetup& setup, double tau, double h, double r,
                           Branch branch) {
  if (!(tau > 0.0) || !(h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tau and h must be positive");
  }
  const double eps = setup.epsilon;
  FilterParams p;
  p.tau = tau;
  p.h = h;
  p.alpha = ReducedAngle::from_value(setup.phase_rate() * tau / (eps * eps));
  p.beta = ReducedAngle::from_value(setup.kappa * h / eps);
  const double tb = tanc(p.beta);
  p.rho = eps * eps / (tb * tb);
  p.r = r;
  p.branch = Branch::plus;
  p.mu = setup.c_g;
  p.consistent = false;
  return p.for_branch(branch, setup);
}

ConsistencyResiduals check_consistency(const PhysicalSetup& setup, const FilterParams& params) {
  const double eps = setup.epsilon;
  const double eps2 = eps * eps;
  // The minus branch flips (omega, alpha) together; the ratio is unchanged.
  const double omega = (params.branch == Branch::minus) ? -setup.omega : setup.omega;
  const double res1 =
      -eps2 * eps2 * params.alpha.sin() / (omega * params.tau * psi1(params.alpha)) - params.rho;
  const double tb = tanc(params.beta);
  const double res2 = eps2 / (tb * tb) - params.rho;
  return {res1, res2};
}

StabilityReport check_stability(const PhysicalSetup& setup, const FilterParams& params) {
  const double eps = setup.epsilon;
  const double eps2 = eps * eps;
  const double tau2 = params.tau * params.tau;
  const double h2 = params.h * params.h;
  const double p1 = std::abs(psi1(params.alpha));
  const double speed2 = (params.branch == Branch::zero) ? 0.0 : setup.c_g * setup.c_g;

  StabilityReport rep;
  rep.per_term[0] = std::abs(phi1(params.alpha));
  rep.per_term[1] = tau2 * std::abs(speed2 - 1.0) / (eps2 * h2) *
                    ((1.0 + std::abs(phi2(params.beta))) / std::abs(psi2(params.beta))) * p1;
  rep.per_term[2] = tau2 / (2.0 * eps2 * eps2) * p1;
  rep.lhs = rep.per_term[0] + rep.per_term[1] + rep.per_term[2];
  rep.r = params.r;
  rep.satisfied = rep.lhs <= params.r;
  return rep;
}

}  // namespace ffkg
