#pragma once

// Shift-aligned uniform grids, sampled containers and the discrete Fourier
// bridge between frequency and time.
//
// Conventions (x and xi in integer-shift units):
//   frequency points  xi_i = i / S,        i in [-Xi*S, Xi*S)
//   time points       x_m  = m / (2 Xi),   m in [-Xi*S, Xi*S)
//   phi(x)  = int phihat(xi) e^{+2 pi i xi x} dxi
//   phihat(xi) = int phi(x) e^{-2 pi i xi x} dx
// Both integrals are discretized by the (periodic) trapezoid rule, so the
// forward and inverse transforms are exact inverses of each other.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sispace {

using Complex = std::complex<double>;

class FrequencyGrid {
 public:
  /// Throws PreconditionError unless S >= 2, Xi >= 2 and 2*Xi*S is a power of two.
  FrequencyGrid(int samples_per_unit, int half_range);

  int samples_per_unit() const noexcept { return samples_per_unit_; }
  int half_range() const noexcept { return half_range_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return 1.0 / samples_per_unit_; }

  std::int64_t first_index() const noexcept { return -static_cast<std::int64_t>(size_ / 2); }
  std::int64_t index_at(std::size_t pos) const noexcept {
    return static_cast<std::int64_t>(pos) + first_index();
  }
  bool contains(std::int64_t index) const noexcept {
    return index >= first_index() && index < -first_index();
  }
  /// Array position of lattice index i; i must be contained in the grid.
  std::size_t position(std::int64_t index) const noexcept {
    return static_cast<std::size_t>(index - first_index());
  }
  double frequency(std::size_t pos) const noexcept {
    return static_cast<double>(index_at(pos)) / samples_per_unit_;
  }
  /// Lattice index of xi when xi is (to rounding) a grid point inside the grid.
  std::optional<std::int64_t> index_of(double xi) const noexcept;
  /// Index after the exact integer shift xi -> xi + k, if still on the grid.
  std::optional<std::int64_t> shift_by_integer(std::int64_t index, std::int64_t k) const noexcept;

  double time_spacing() const noexcept { return 1.0 / (2.0 * half_range_); }
  double half_span() const noexcept { return samples_per_unit_ / 2.0; }
  double time(std::size_t pos) const noexcept {
    return static_cast<double>(index_at(pos)) * time_spacing();
  }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  int samples_per_unit_;
  int half_range_;
  std::size_t size_;
};

FrequencyGrid make_grid(int samples_per_unit, int half_range);

/// Contiguous run of lattice indices [first, last] attributed to one
/// construction block (block 0 is the core window at the origin).
struct BlockSpan {
  int block = 0;
  std::int64_t first = 0;
  std::int64_t last = 0;
};

/// A generator's Fourier transform sampled on a FrequencyGrid. Immutable once
/// built; the rvalue `with_*` setters attach metadata during construction.
class SampledSpectrum {
 public:
  SampledSpectrum(FrequencyGrid grid, std::vector<Complex> values, std::string label);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }

  /// Value at lattice index i; zero outside the grid.
  Complex at_index(std::int64_t index) const noexcept {
    return grid_.contains(index) ? values_[grid_.position(index)] : Complex{};
  }
  /// f(xi + k) as a new spectrum; values shifted off the grid become zero.
  SampledSpectrum shifted(std::int64_t k) const;

  bool hermitian() const noexcept { return hermitian_; }
  /// Half-width of the band around 1/2 + Z excluded from a.e. criteria.
  /// A width of 0 excludes exactly the grid points xi = 1/2 mod 1.
  std::optional<double> exclusion_half_width() const noexcept { return exclusion_half_width_; }
  bool excluded(std::int64_t index) const noexcept;
  const std::vector<BlockSpan>& blocks() const noexcept { return blocks_; }

  SampledSpectrum&& with_hermitian(bool asserted) &&;
  SampledSpectrum&& with_exclusion(double half_width) &&;
  SampledSpectrum&& with_blocks(std::vector<BlockSpan> blocks) &&;

 private:
  FrequencyGrid grid_;
  std::vector<Complex> values_;
  std::string label_;
  bool hermitian_ = false;
  std::optional<double> exclusion_half_width_;
  std::vector<BlockSpan> blocks_;
};

/// Time-domain samples dual to a SampledSpectrum: spacing 1/(2 Xi), span S.
class SampledSignal {
 public:
  SampledSignal(FrequencyGrid grid, std::vector<Complex> values, std::string label);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  double time_spacing() const noexcept { return grid_.time_spacing(); }
  double half_span() const noexcept { return grid_.half_span(); }
  double time(std::size_t pos) const noexcept { return grid_.time(pos); }

 private:
  FrequencyGrid grid_;
  std::vector<Complex> values_;
  std::string label_;
};

SampledSignal to_time_domain(const SampledSpectrum& f);
/// Forward transform; the result carries no block or exclusion metadata.
SampledSpectrum to_freq_domain(const SampledSignal& s);

/// Trapezoid approximation of the continuum L2 norm.
double l2_norm(const SampledSpectrum& f);
double l2_norm(const SampledSignal& s);

/// Evaluates the trigonometric interpolant of to_time_domain(f) at arbitrary
/// x, i.e. (1/S) sum_i f(xi_i) e^{2 pi i xi_i x}. Agrees with the FFT output
/// at grid points.
class SpectralInterpolator {
 public:
  explicit SpectralInterpolator(const SampledSpectrum& f);
  Complex operator()(double x) const;

 private:
  double scale_;
  std::vector<double> frequencies_;
  std::vector<Complex> values_;
};

}  // namespace sispace
