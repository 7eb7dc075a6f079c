#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ffkg/field.hpp"
#include "ffkg/params.hpp"

namespace ffkg {

/// Profiles a0, b0 of the modulated-plane-wave initial data
///   u(0,x) = a0(x) e^{i kappa x / eps},  d_t u(0,x) = b0(x) e^{i kappa x / eps} / eps^2.
struct InitialProfiles {
  std::function<cplx(double)> a0;
  std::function<cplx(double)> b0;

  /// a0 = exp(-x^2), b0 = i exp(-x^2)
  static InitialProfiles gaussian();
  static InitialProfiles zero();
  /// b0 = -i omega a0, so only the right-moving packet is excited.
  static InitialProfiles right_moving(double omega);
};

/// Initial envelopes a+(0) = (a0 + i b0/omega)/2 and a-(0) = (a0 - i b0/omega)/2.
std::pair<EnvelopeField, EnvelopeField> nls_initial_envelopes(const InitialProfiles& profiles,
                                                              const PeriodicGrid& grid,
                                                              double omega);

/// Strang splitting for the envelope equations
///   +-2 i omega d_t a = -(1 - c_g^2) d_xi^2 a + lambda |a|^2 a
/// (upper sign: plus branch). Both subflows are solved exactly.
class NlsStepper {
 public:
  NlsStepper(const PeriodicGrid& grid, Branch branch, const PhysicalSetup& setup);

  /// One Strang step; dt may be negative.
  void step(std::span<cplx> a, double dt);
  void advance(EnvelopeField& a, double dt);

 private:
  PeriodicGrid grid_;
  double sign_;
  double disp_;      // (1 - c_g^2) / (2 omega)
  double nl_rate_;   // lambda / (2 omega)
  Fft fft_;
  std::vector<double> k2_;
  double cached_dt_ = 0.0;
  std::vector<cplx> multiplier_;
};

EnvelopeField nls_strang_step(const EnvelopeField& a, double dt, Branch branch,
                              const PhysicalSetup& setup);

/// Envelope snapshots at t_n = n tau for n = first_step .. last_step, produced
/// with an internal step that divides tau.
struct EnvelopeTrajectory {
  Branch branch = Branch::plus;
  double tau = 0.0;
  std::int64_t first_step = -1;
  double internal_dt = 0.0;
  /// max-norm difference between the accepted run and the one at twice the step
  double self_convergence = 0.0;
  std::vector<EnvelopeField> snapshots;

  std::int64_t last_step() const {
    return first_step + static_cast<std::int64_t>(snapshots.size()) - 1;
  }
  const PeriodicGrid& grid() const { return snapshots.front().grid; }
  const EnvelopeField& at_step(std::int64_t n) const;
  const EnvelopeField& at_time(double t) const;
};

struct TrajectoryOptions {
  double internal_dt = 1e-3;
  double tolerance = 1e-8;
  int max_refinements = 5;
};

/// Snapshots at n tau for n = -1 .. last_step, starting from a(0) = initial.
EnvelopeTrajectory envelope_trajectory(Branch branch, const PhysicalSetup& setup,
                                       const EnvelopeField& initial, double tau,
                                       std::int64_t last_step, const TrajectoryOptions& opts = {});

/// A(t, xi) = a(t, xi) e^{i kappa xi / eps} e^{i phase}.
WaveField dominant_term(const EnvelopeField& a, const ReducedAngle& phase,
                        const PhysicalSetup& setup);
/// Phase +-(kappa c_g - omega) t / eps^2 for the plus/minus branch.
WaveField dominant_term(const EnvelopeField& a, double t, Branch branch,
                        const PhysicalSetup& setup);

/// e^{i kappa x / eps} at every node.
std::vector<cplx> carrier(const PeriodicGrid& grid, const PhysicalSetup& setup);

/// u_app(t, x) = a+(t, x - c_g t/eps) e^{i(kappa x - omega t/eps)/eps}
///             + a-(t, x + c_g t/eps) e^{i(kappa x + omega t/eps)/eps}
std::vector<cplx> u_app(const EnvelopeTrajectory& plus, const EnvelopeTrajectory& minus,
                        const PhysicalSetup& setup, double t, std::span<const double> x);

/// Klein-Gordon state as (u, eps^2 d_t u).
struct KgState {
  WaveField u;
  WaveField p;
};

/// Strang splitting of the first-order form of the full equation: the linear
/// part is an exact rotation per Fourier mode, the cubic part an exact kick.
class KgStepper {
 public:
  KgStepper(const PeriodicGrid& grid, const PhysicalSetup& setup);
  void step(KgState& s, double dt);
  /// Integrates over [t, t + duration] with steps no larger than max_dt.
  void advance(KgState& s, double duration, double max_dt);

 private:
  PeriodicGrid grid_;
  PhysicalSetup setup_;
  Fft fft_;
  std::vector<double> freq_;
  double cached_dt_ = 0.0;
  std::vector<double> cos_, sin_;
  std::vector<cplx> uh_, ph_;
};

KgState kg_initial_state(const InitialProfiles& profiles, const PeriodicGrid& grid,
                         const PhysicalSetup& setup);

KgState kg_reference(const PhysicalSetup& setup, const InitialProfiles& profiles,
                     const PeriodicGrid& grid, double dt_ref, double t_end);

}  // namespace ffkg
