#include "ffkg/kernels.hpp"

#include <cmath>

namespace ffkg::kernels {

namespace {

inline std::size_t left(std::size_t j, std::size_t m) { return j == 0 ? m - 1 : j - 1; }
inline std::size_t right(std::size_t j, std::size_t m) { return j + 1 == m ? 0 : j + 1; }

inline cplx rhs_at(const Stencil& s, const cplx* prev, const cplx* cur, std::size_t j,
                   std::size_t m) {
  const std::size_t jl = left(j, m);
  const std::size_t jr = right(j, m);
  const cplx w = cur[j];
  const cplx time_part = s.c_tt * (2.0 * s.phi1 * w - prev[j]);
  const cplx mixed_old = s.c_mix * (prev[jr] - prev[jl]);
  const cplx space = s.c_xx * (cur[jr] - 2.0 * s.phi2 * w + cur[jl]);
  const cplx cubic = s.c_nl * std::norm(w) * w;
  return time_part - mixed_old - space - w - cubic;
}

inline cplx residual_at(const Stencil& s, const cplx* prev, const cplx* cur, const cplx* next,
                        std::size_t j, std::size_t m) {
  const std::size_t jl = left(j, m);
  const std::size_t jr = right(j, m);
  const cplx w = cur[j];
  const cplx time_part = s.c_tt * (next[j] - 2.0 * s.phi1 * w + prev[j]);
  const cplx mixed = s.c_mix * ((next[jr] - prev[jr]) - (next[jl] - prev[jl]));
  const cplx space = s.c_xx * (cur[jr] - 2.0 * s.phi2 * w + cur[jl]);
  const cplx cubic = s.c_nl * std::norm(w) * w;
  return time_part - mixed + space + w + cubic;
}

inline cplx cubic_phase_at(cplx a, double rate) { return a * std::polar(1.0, rate * std::norm(a)); }

}  // namespace

void assemble_rhs_serial(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                         std::span<cplx> out) {
  const std::size_t m = cur.size();
  for (std::size_t j = 0; j < m; ++j) out[j] = rhs_at(s, prev.data(), cur.data(), j, m);
}

void assemble_rhs_omp(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                      std::span<cplx> out) {
  const std::size_t m = cur.size();
  const cplx* pp = prev.data();
  const cplx* pc = cur.data();
  cplx* po = out.data();
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (std::size_t j = 0; j < m; ++j) po[j] = rhs_at(s, pp, pc, j, m);
}

void scheme_residual_serial(const Stencil& s, std::span<const cplx> prev,
                            std::span<const cplx> cur, std::span<const cplx> next,
                            std::span<cplx> out) {
  const std::size_t m = cur.size();
  for (std::size_t j = 0; j < m; ++j) {
    out[j] = residual_at(s, prev.data(), cur.data(), next.data(), j, m);
  }
}

void scheme_residual_omp(const Stencil& s, std::span<const cplx> prev, std::span<const cplx> cur,
                         std::span<const cplx> next, std::span<cplx> out) {
  const std::size_t m = cur.size();
  const cplx* pp = prev.data();
  const cplx* pc = cur.data();
  const cplx* pn = next.data();
  cplx* po = out.data();
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (std::size_t j = 0; j < m; ++j) po[j] = residual_at(s, pp, pc, pn, j, m);
}

void divide_modes_serial(std::span<cplx> data, std::span<const cplx> divisor) {
  for (std::size_t k = 0; k < data.size(); ++k) data[k] /= divisor[k];
}

void divide_modes_omp(std::span<cplx> data, std::span<const cplx> divisor) {
  const std::size_t m = data.size();
  cplx* pd = data.data();
  const cplx* pv = divisor.data();
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (std::size_t k = 0; k < m; ++k) pd[k] /= pv[k];
}

void cubic_phase_serial(std::span<cplx> a, double rate) {
  for (auto& z : a) z = cubic_phase_at(z, rate);
}

void cubic_phase_omp(std::span<cplx> a, double rate) {
  const std::size_t m = a.size();
  cplx* pa = a.data();
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (std::size_t j = 0; j < m; ++j) pa[j] = cubic_phase_at(pa[j], rate);
}

void cubic_kick_serial(std::span<const cplx> u, std::span<cplx> p, double lambda_dt) {
  for (std::size_t j = 0; j < u.size(); ++j) p[j] -= lambda_dt * std::norm(u[j]) * u[j];
}

void cubic_kick_omp(std::span<const cplx> u, std::span<cplx> p, double lambda_dt) {
  const std::size_t m = u.size();
  const cplx* pu = u.data();
  cplx* pp = p.data();
#pragma omp parallel for schedule(static) if (m >= kParallelThreshold)
  for (std::size_t j = 0; j < m; ++j) pp[j] -= lambda_dt * std::norm(pu[j]) * pu[j];
}

}  // namespace ffkg::kernels
