#pragma once

#include <array>

#include "ffkg/filters.hpp"

namespace ffkg {

/// Which co-moving frame a run uses.
///   plus:  mu = +c_g, right-moving packet
///   minus: mu = -c_g with (omega, c_g) sign-flipped
///   zero:  mu = 0, the filtered leapfrog for the original equation
enum class Branch { plus, minus, zero };

const char* to_string(Branch b) noexcept;

/// Constants of the continuous problem.
struct PhysicalSetup {
  double epsilon = 1.0;
  double kappa = 1.0;
  double lambda = 1.0;
  double t_final = 1.0;
  double omega = 0.0;
  double c_g = 0.0;

  /// Fills omega and c_g from kappa; validates epsilon and kappa.
  static PhysicalSetup make(double epsilon, double kappa, double lambda, double t_final);

  /// kappa c_g - omega, which equals -1/omega.
  double phase_rate() const { return -1.0 / omega; }
};

struct Dispersion {
  double omega;
  double c_g;
};

Dispersion derive_dispersion(double kappa);

/// Discretization parameters. alpha and beta are the primary quantities;
/// tau and h are derived from them.
struct FilterParams {
  double tau = 0.0;
  double h = 0.0;
  ReducedAngle alpha;
  ReducedAngle beta;
  double rho = 1.0;
  double r = 0.9;
  double mu = 0.0;
  Branch branch = Branch::plus;
  /// true when alpha and beta come from the consistency solve
  bool consistent = false;

  /// Same step sizes, expressed for another branch. alpha flips sign for minus.
  FilterParams for_branch(Branch b, const PhysicalSetup& setup) const;
};

struct BetaSolution {
  ReducedAngle beta;
  double h;
};

struct AlphaSolution {
  ReducedAngle alpha;
  double tau;
};

/// Root of eps^2 / tanc^2(beta) = rho nearest to beta0 = kappa h_target / eps.
BetaSolution solve_beta(double epsilon, double rho, double kappa, double h_target);

/// Root of eps^2 sinc(alpha) / psi1(alpha) = rho omega^2 nearest to
/// alpha0 = (kappa c_g - omega) tau_target / eps^2. alpha is negative for tau > 0.
AlphaSolution solve_alpha(const PhysicalSetup& setup, double rho, double tau_target);

/// Solves both halves of the consistency condition for the plus branch.
FilterParams solve_params(const PhysicalSetup& setup, double rho, double r, double h_target,
                          double tau_target);

/// Parameters taken directly from tau and h, without the consistency solve.
FilterParams direct_params(const PhysicalSetup& setup, double tau, double h, double r,
                           Branch branch);

struct ConsistencyResiduals {
  double res1;  // -eps^4 sin(alpha) / (omega tau psi1(alpha)) - rho
  double res2;  // eps^2 / tanc^2(beta) - rho
};

ConsistencyResiduals check_consistency(const PhysicalSetup& setup, const FilterParams& params);

struct StabilityReport {
  double lhs = 0.0;
  double r = 0.0;
  bool satisfied = false;
  std::array<double, 3> per_term{};
};

StabilityReport check_stability(const PhysicalSetup& setup, const FilterParams& params);

}  // namespace ffkg
