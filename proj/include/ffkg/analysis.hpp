#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ffkg/field.hpp"
#include "ffkg/params.hpp"
#include "ffkg/reference.hpp"
#include "ffkg/scheme.hpp"

namespace ffkg {

using Matrix2 = std::array<std::array<cplx, 2>, 2>;

/// Linearised one-step map of a single Fourier mode.
struct ModeAnalysis {
  double theta = 0.0;  // K h
  double c1 = 0.0;
  double c2 = 0.0;
  Matrix2 G{};
  cplx lambda_plus;
  cplx lambda_minus;
  /// |2 phi1 - c2| / (2 sqrt(1 + c1^2)); below 1 means distinct unit eigenvalues
  double q = 0.0;
  double norm_P = 0.0;
  double norm_P_inv = 0.0;
  double cond_P = 0.0;
};

/// Mode with phase angle theta = K h per grid step.
ModeAnalysis amplification(double theta, const PhysicalSetup& setup, const FilterParams& params);
/// FFT slot k of the grid.
ModeAnalysis amplification(std::size_t slot, const PeriodicGrid& grid, const PhysicalSetup& setup,
                           const FilterParams& params);

/// (w^{n+1}, w^n) = G (w^n, w^{n-1}).
std::array<cplx, 2> apply(const Matrix2& g, const std::array<cplx, 2>& x);

struct ErrorReport {
  double err_linf = 0.0;
  double err_wiener = 0.0;
  /// max |eps^2 v - (-+ i omega) A|
  double err_velocity = 0.0;
  double t = 0.0;
  std::int64_t step = 0;
};

/// A(t_n) of the branch on the scheme grid: the envelope snapshot interpolated
/// to the nodes, times the carrier and the phase exp(i n alpha).
WaveField dominant_on_grid(const EnvelopeTrajectory& env, std::int64_t n, const PeriodicGrid& grid,
                           const PhysicalSetup& setup, const FilterParams& params);

ErrorReport error_report(const WaveField& w, const WaveField& v, const EnvelopeTrajectory& env,
                         std::int64_t n, const PhysicalSetup& setup, const FilterParams& params);

/// Errors of a zero-branch run against a resolved Klein-Gordon state.
ErrorReport kg_error_report(const WaveField& w, const WaveField& v, const KgState& ref,
                            const PhysicalSetup& setup);

/// Residual of the scheme, scaled by eps^2, when the dominant term of the
/// envelope trajectory is inserted at t_n on the scheme grid. Neighbouring
/// nodes use the exact carrier factor exp(+-i beta).
WaveField defect(const EnvelopeTrajectory& env, std::int64_t n, const PhysicalSetup& setup,
                 const FilterParams& params, const PeriodicGrid& grid);

/// Least-squares slope of log(y) against log(x); NaN with fewer than two usable points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct StudyConfig {
  double kappa = 1.0;
  double lambda = 1.0;
  double t_final = 1.0;
  double rho = 1.0;
  double r = 0.9;
  double x_min = -4.0;
  double x_max = 4.0;
  std::vector<double> epsilons;
  std::vector<double> h_targets;
  /// tau_target = tau_factor * h^2, with h the solved mesh width
  double tau_factor = 1.0;
  InitialProfiles profiles = InitialProfiles::gaussian();
  std::size_t reference_modes = 2048;
  TrajectoryOptions trajectory;
  Branch branch = Branch::plus;
};

struct StudyRow {
  double epsilon = 0.0;
  double h_target = 0.0;
  FilterParams params;
  std::int64_t steps = 0;
  std::size_t nodes = 0;
  double stab_lhs = 0.0;
  ErrorReport error;
  double reference_self_convergence = 0.0;
  bool skipped = false;
  std::string reason;
  double slope_linf = 0.0;
  double slope_velocity = 0.0;
};

/// One run per (epsilon, h_target) of a single branch against the envelope
/// reference, errors at t_N = N tau with N = round(T / tau). Rows that fail the
/// parameter solve or the stability bound are kept and marked skipped. Slopes
/// are fitted per epsilon over the solved h values.
std::vector<StudyRow> convergence_study(const StudyConfig& cfg);

/// Run of one (epsilon, h_target) pair; the building block of convergence_study.
StudyRow study_row(const StudyConfig& cfg, double epsilon, double h_target);

struct LeapfrogRow {
  double h = 0.0;
  double tau = 0.0;
  std::size_t nodes = 0;
  std::int64_t steps = 0;
  double stab_lhs = 0.0;
  ErrorReport error;
  double slope_linf = 0.0;
  double slope_velocity = 0.0;
};

struct LeapfrogConfig {
  double epsilon = 1.0;
  double kappa = 1.0;
  double lambda = 1.0;
  double t_final = 1.0;
  double r = 0.9;
  double x_min = -4.0;
  double x_max = 4.0;
  std::vector<std::size_t> node_counts;
  double tau_factor = 0.5;  // tau ~ tau_factor h^2, adjusted so T / tau is an integer
  InitialProfiles profiles = InitialProfiles::gaussian();
  std::size_t reference_modes = 2048;
  double reference_dt = 5e-4;
};

/// Zero-branch runs against the resolved Klein-Gordon reference.
std::vector<LeapfrogRow> leapfrog_study(const LeapfrogConfig& cfg);

}  // namespace ffkg
