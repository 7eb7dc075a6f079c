#pragma once

// Pointwise grid kernels used inside the time steppers. Each kernel has a
// serial reference version and an OpenMP version with identical arithmetic,
// so the two agree bit for bit; tests and the benchmark compare them.

#include <complex>
#include <cstddef>
#include <span>

namespace ffkg::kernels {

using cplx = std::complex<double>;

/// Below this many nodes the OpenMP versions run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4096;

/// Weights of the filtered two-step stencil after scaling by epsilon^2.
struct Stencil {
  double c_tt = 1.0;   // eps^4 / (tau^2 psi1(alpha))
  double c_mix = 0.0;  // 2 eps^3 mu / (4 sinc(alpha) sinc(beta) tau h)
  double c_xx = 0.0;   // eps^2 (mu^2 - 1) / (h^2 psi2(beta))
  double c_nl = 0.0;   // eps^2 lambda / tanc^2(beta)
  double phi1 = 1.0;   // phi1(alpha)
  double phi2 = 1.0;   // phi2(beta)
};

/// Explicit part of the two-step update: everything except the terms in the
/// new level, which are c_tt w^{n+1}_j - c_mix (w^{n+1}_{j+1} - w^{n+1}_{j-1}).
void assemble_rhs_serial(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                         std::span<cplx> out);
void assemble_rhs_omp(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                      std::span<cplx> out);

/// Residual of the full two-step equation at every node.
void scheme_residual_serial(const Stencil& s, std::span<const cplx> prev,
                            std::span<const cplx> cur, std::span<const cplx> next,
                            std::span<cplx> out);
void scheme_residual_omp(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                         std::span<const cplx> next, std::span<cplx> out);

/// data[k] /= divisor[k]
void divide_modes_serial(std::span<cplx> data, std::span<const cplx> divisor);
void divide_modes_omp(std::span<cplx> data, std::span<const cplx> divisor);

/// a_j <- a_j exp(i rate |a_j|^2), the exact flow of a' = i c |a|^2 a.
void cubic_phase_serial(std::span<cplx> a, double rate);
void cubic_phase_omp(std::span<cplx> a, double rate);

/// p_j <- p_j - dt lambda |u_j|^2 u_j
void cubic_kick_serial(std::span<const cplx> u, std::span<cplx> p, double lambda_dt);
void cubic_kick_omp(std::span<const cplx> u, std::span<cplx> p, double lambda_dt);

}  // namespace ffkg::kernels
