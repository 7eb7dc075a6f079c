#include "ffkg/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

#include "ffkg/error.hpp"
#include "ffkg/filters.hpp"

namespace ffkg {

PeriodicGrid::PeriodicGrid(double x_min, double h, std::size_t m) : x_min_(x_min), h_(h), m_(m) {
  if (m == 0 || !(h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid needs M >= 1 and h > 0");
  }
}

PeriodicGrid PeriodicGrid::from_length(double x_min, double length, std::size_t m) {
  return PeriodicGrid(x_min, length / static_cast<double>(m), m);
}

PeriodicGrid PeriodicGrid::fitted(double x_min, double length, double h) {
  const auto m = static_cast<std::size_t>(std::max(1.0, std::round(length / h)));
  const double centre = x_min + 0.5 * length;
  return PeriodicGrid(centre - 0.5 * h * static_cast<double>(m), h, m);
}

std::vector<double> PeriodicGrid::nodes() const {
  std::vector<double> x(m_);
  for (std::size_t j = 0; j < m_; ++j) x[j] = node(j);
  return x;
}

std::ptrdiff_t PeriodicGrid::mode_index(std::size_t slot) const {
  const auto s = static_cast<std::ptrdiff_t>(slot);
  const auto m = static_cast<std::ptrdiff_t>(m_);
  return (2 * s < m) ? s : s - m;
}

double PeriodicGrid::wavenumber(std::size_t slot) const {
  return 2.0 * kPi * static_cast<double>(mode_index(slot)) / length();
}

double PeriodicGrid::wrap(double x) const {
  const double len = length();
  double y = std::fmod(x - x_min_, len);
  if (y < 0.0) y += len;
  if (y >= len) y -= len;
  return x_min_ + y;
}

bool PeriodicGrid::same_as(const PeriodicGrid& o) const {
  const double tol = 1e-12 * std::max(1.0, std::abs(length()));
  return m_ == o.m_ && std::abs(h_ - o.h_) <= tol && std::abs(x_min_ - o.x_min_) <= tol;
}

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Impl {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf = fftw_alloc_complex(n);
    const int ni = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(buf);
  }
};

Fft::Fft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

void Fft::forward(std::span<cplx> data) {
  std::memcpy(impl_->buf, data.data(), n_ * sizeof(cplx));
  fftw_execute(impl_->fwd);
  std::memcpy(static_cast<void*>(data.data()), impl_->buf, n_ * sizeof(cplx));
}

void Fft::backward(std::span<cplx> data) {
  std::memcpy(impl_->buf, data.data(), n_ * sizeof(cplx));
  fftw_execute(impl_->bwd);
  std::memcpy(static_cast<void*>(data.data()), impl_->buf, n_ * sizeof(cplx));
}

namespace {

void check_size(const PeriodicGrid& grid, std::size_t n) {
  if (grid.size() != n) throw Error(ErrorCode::GridMismatch, "value count differs from grid size");
}

// Coefficients relative to x_min: f(x) = sum_k c_k exp(i K_k (x - x_min)).
std::vector<cplx> local_coefficients(const PeriodicGrid& grid, std::span<const cplx> values) {
  check_size(grid, values.size());
  std::vector<cplx> c(values.begin(), values.end());
  Fft fft(c.size());
  fft.forward(c);
  const double inv = 1.0 / static_cast<double>(c.size());
  for (auto& z : c) z *= inv;
  return c;
}

}  // namespace

std::vector<cplx> dft(const PeriodicGrid& grid, std::span<const cplx> values) {
  std::vector<cplx> c = local_coefficients(grid, values);
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] *= std::polar(1.0, -grid.wavenumber(k) * grid.x_min());
  }
  return c;
}

std::vector<cplx> idft(const PeriodicGrid& grid, std::span<const cplx> coeffs) {
  check_size(grid, coeffs.size());
  std::vector<cplx> f(coeffs.begin(), coeffs.end());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] *= std::polar(1.0, grid.wavenumber(k) * grid.x_min());
  }
  Fft fft(f.size());
  fft.backward(f);
  return f;
}

double wiener_norm(const PeriodicGrid& grid, std::span<const cplx> values) {
  const std::vector<cplx> c = local_coefficients(grid, values);
  double sum = 0.0;
  for (const cplx& z : c) sum += std::abs(z);
  return sum;
}

double max_norm(std::span<const cplx> values) {
  double m = 0.0;
  for (const cplx& z : values) m = std::max(m, std::abs(z));
  return m;
}

TrigInterpolant::TrigInterpolant(const PeriodicGrid& grid, std::span<const cplx> values)
    : grid_(grid), coeffs_(local_coefficients(grid, values)) {
  const std::size_t m = grid.size();
  wavenumbers_.resize(m);
  for (std::size_t k = 0; k < m; ++k) wavenumbers_[k] = grid.wavenumber(k);
}

cplx TrigInterpolant::operator()(double x) const {
  const std::size_t m = coeffs_.size();
  const double y = grid_.wrap(x) - grid_.x_min();
  const bool has_nyquist = (m % 2 == 0) && m > 1;
  const std::size_t nyquist = m / 2;
  cplx sum{0.0, 0.0};
  for (std::size_t k = 0; k < m; ++k) {
    if (has_nyquist && k == nyquist) {
      // split evenly between +-M/2 so the interpolant stays symmetric
      sum += coeffs_[k] * std::cos(wavenumbers_[k] * y);
    } else {
      sum += coeffs_[k] * std::polar(1.0, wavenumbers_[k] * y);
    }
  }
  return sum;
}

std::vector<cplx> resample(const PeriodicGrid& from, std::span<const cplx> values,
                           const PeriodicGrid& to) {
  const TrigInterpolant interp(from, values);
  std::vector<cplx> out(to.size());
  for (std::size_t j = 0; j < to.size(); ++j) out[j] = interp(to.node(j));
  return out;
}

}  // namespace ffkg
