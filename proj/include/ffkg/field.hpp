#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ffkg {

using cplx = std::complex<double>;

/// Uniform periodic grid with nodes x_min + j h, j = 0..M-1.
class PeriodicGrid {
 public:
  PeriodicGrid() = default;
  PeriodicGrid(double x_min, double h, std::size_t m);

  /// Grid of M nodes covering [x_min, x_min + length).
  static PeriodicGrid from_length(double x_min, double length, std::size_t m);
  /// Grid with spacing h whose period is the multiple of h nearest to the
  /// requested length, centred on the midpoint of [x_min, x_min + length).
  static PeriodicGrid fitted(double x_min, double length, double h);

  double x_min() const { return x_min_; }
  double h() const { return h_; }
  std::size_t size() const { return m_; }
  double length() const { return h_ * static_cast<double>(m_); }
  double node(std::size_t j) const { return x_min_ + static_cast<double>(j) * h_; }
  std::vector<double> nodes() const;

  /// Signed mode index for FFT slot j (symmetric set).
  std::ptrdiff_t mode_index(std::size_t slot) const;
  /// Physical wavenumber 2 pi k / length for FFT slot j.
  double wavenumber(std::size_t slot) const;
  /// Wraps x into [x_min, x_min + length).
  double wrap(double x) const;
  bool contains(double x) const { return x >= x_min_ && x < x_min_ + length(); }

  bool same_as(const PeriodicGrid& other) const;

 private:
  double x_min_ = 0.0;
  double h_ = 1.0;
  std::size_t m_ = 1;
};

/// One time level of a complex grid function. The tag separates full wave
/// fields from slowly varying envelopes at the type level.
template <class Tag>
struct GridField {
  PeriodicGrid grid;
  std::vector<cplx> values;
  double time = 0.0;

  GridField() = default;
  explicit GridField(PeriodicGrid g, double t = 0.0)
      : grid(g), values(g.size(), cplx{0.0, 0.0}), time(t) {}
  GridField(PeriodicGrid g, std::vector<cplx> v, double t = 0.0)
      : grid(g), values(std::move(v)), time(t) {}

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t j) { return values[j]; }
  const cplx& operator[](std::size_t j) const { return values[j]; }
  std::span<const cplx> view() const { return values; }
  std::span<cplx> view() { return values; }
};

struct WaveTag {};
struct EnvelopeTag {};
using WaveField = GridField<WaveTag>;
using EnvelopeField = GridField<EnvelopeTag>;

/// In-place complex FFT of a fixed length backed by FFTW. Owns its buffers, so
/// one instance must not be used from two threads at once.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;

  std::size_t size() const { return n_; }
  /// Unnormalised forward transform, sum_j x_j exp(-2 pi i k j / n).
  void forward(std::span<cplx> data);
  /// Unnormalised backward transform, sum_k X_k exp(+2 pi i k j / n).
  void backward(std::span<cplx> data);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Fourier coefficients c_k with f(x_j) = sum_k c_k exp(i K_k x_j), where K_k
/// is the physical wavenumber of FFT slot k.
std::vector<cplx> dft(const PeriodicGrid& grid, std::span<const cplx> values);
std::vector<cplx> idft(const PeriodicGrid& grid, std::span<const cplx> coeffs);

template <class Tag>
std::vector<cplx> dft(const GridField<Tag>& f) {
  return dft(f.grid, f.view());
}

/// Discrete Wiener algebra norm: sum of |c_k|.
double wiener_norm(const PeriodicGrid& grid, std::span<const cplx> values);
double max_norm(std::span<const cplx> values);

template <class Tag>
double wiener_norm(const GridField<Tag>& f) {
  return wiener_norm(f.grid, f.view());
}
template <class Tag>
double max_norm(const GridField<Tag>& f) {
  return max_norm(f.view());
}

/// Trigonometric interpolant evaluated at arbitrary points. Construction costs
/// one FFT; each evaluation is O(M).
class TrigInterpolant {
 public:
  TrigInterpolant(const PeriodicGrid& grid, std::span<const cplx> values);
  template <class Tag>
  explicit TrigInterpolant(const GridField<Tag>& f) : TrigInterpolant(f.grid, f.view()) {}

  cplx operator()(double x) const;
  const PeriodicGrid& grid() const { return grid_; }

 private:
  PeriodicGrid grid_;
  std::vector<double> wavenumbers_;
  std::vector<cplx> coeffs_;
};

template <class Tag>
cplx trig_interpolate(const GridField<Tag>& f, double x) {
  return TrigInterpolant(f)(x);
}

/// Values of a band-limited field at the nodes of another grid with the same
/// period and origin, via its trigonometric interpolant.
std::vector<cplx> resample(const PeriodicGrid& from, std::span<const cplx> values,
                           const PeriodicGrid& to);

}  // namespace ffkg
