#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ffkg/field.hpp"
#include "ffkg/kernels.hpp"
#include "ffkg/params.hpp"
#include "ffkg/reference.hpp"

namespace ffkg {

/// Weights of the filtered two-step scheme, scaled by epsilon^2, together with
/// the per-mode divisor of the implicit mixed term.
struct SchemeCoefficients {
  kernels::Stencil stencil;
  double c_pot = 1.0;
  /// D_k = c_tt - 2 i c_mix sin(K_k h), one entry per FFT slot.
  std::vector<cplx> divisor;
  PeriodicGrid grid;
  FilterParams params;
  double sinc_alpha = 1.0;
  /// -omega_s / (kappa mu - omega_s) in the velocity formula.
  double velocity_prefactor = 1.0;
  bool stable = true;
};

struct CoefficientOptions {
  /// Throw UnstableParameters instead of recording stable = false.
  bool strict = false;
};

SchemeCoefficients build_coefficients(const PhysicalSetup& setup, const FilterParams& params,
                                      const PeriodicGrid& grid,
                                      const CoefficientOptions& opts = {});

/// Two consecutive levels of one branch.
struct BranchState {
  Branch branch = Branch::plus;
  double mu = 0.0;
  WaveField prev;
  WaveField cur;
  std::int64_t n = 0;  // index of cur
};

/// Advances the scheme by one level. Reuses its FFT and scratch storage.
class SchemeStepper {
 public:
  explicit SchemeStepper(SchemeCoefficients coeffs);

  const SchemeCoefficients& coefficients() const { return coeffs_; }

  /// w^{n+1} from (w^{n-1}, w^n).
  WaveField next(const WaveField& prev, const WaveField& cur);
  /// w^{n-1} from (w^n, w^{n+1}); the scheme is symmetric in time.
  WaveField previous(const WaveField& cur, const WaveField& next);
  void step(BranchState& s);

  /// Same update with the serial kernels, kept as a reference for testing.
  WaveField next_serial(const WaveField& prev, const WaveField& cur);

 private:
  WaveField solve(const WaveField& a, const WaveField& b, double time, bool backward,
                  bool serial);

  SchemeCoefficients coeffs_;
  std::vector<cplx> backward_divisor_;
  Fft fft_;
  std::vector<cplx> rhs_;
};

/// Per-node residual of the two-step equation for three consecutive levels.
std::vector<cplx> scheme_residual(const SchemeCoefficients& coeffs, const WaveField& prev,
                                  const WaveField& cur, const WaveField& next);

/// (w^0, w^1) for a branch. plus/minus start from the envelope at t = 0 and one
/// envelope Strang step of size tau. zero starts from the full initial data and
/// a resolved Klein-Gordon integration over [0, tau].
std::pair<WaveField, WaveField> startup(Branch branch, const EnvelopeField& envelope0,
                                        const PhysicalSetup& setup, const FilterParams& params);
std::pair<WaveField, WaveField> startup_zero(const InitialProfiles& profiles,
                                             const PeriodicGrid& grid, const PhysicalSetup& setup,
                                             const FilterParams& params, double dt_ref);

/// v^n = prefactor (w^{n+1} - w^{n-1}) / (2 tau sinc(alpha)).
WaveField velocity(const WaveField& prev, const WaveField& next,
                   const SchemeCoefficients& coeffs);

/// All levels w^0 .. w^{N+1} and velocities v^0 .. v^N of one branch.
struct BranchTrajectory {
  Branch branch = Branch::plus;
  FilterParams params;
  std::vector<WaveField> w;
  std::vector<WaveField> v;

  std::int64_t steps() const { return static_cast<std::int64_t>(v.size()) - 1; }
  const PeriodicGrid& grid() const { return w.front().grid; }
};

/// Runs N steps from (w^0, w^1). v^0 uses a backward step, v^N one step past
/// the final level. Throws NonFinite if a level overflows.
BranchTrajectory run_branch(const SchemeCoefficients& coeffs, WaveField w0, WaveField w1,
                            std::int64_t n_steps);

struct Combined {
  std::vector<cplx> u;
  std::vector<cplx> v;
  bool separated = false;
};

/// Full solution at step n on arbitrary points x. A branch contributes
/// carrier * I(w conj(carrier)) at xi = x -+ c_g t / eps when xi lies in its
/// cell and nothing otherwise.
Combined combine(const BranchTrajectory& plus, const BranchTrajectory& minus, std::int64_t n,
                 const PhysicalSetup& setup, std::span<const double> x);

/// Time from which the two branch cells no longer overlap.
double separation_time(const PhysicalSetup& setup, double period);

}  // namespace ffkg
