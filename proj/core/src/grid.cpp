#include "sispace/grid.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "sispace/errors.hpp"

namespace sispace {
namespace {

// fftw planner calls are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Centered DFT in place: out_q = sum_p in_p exp(sign * 2 pi i (p - N/2)(q - N/2) / N).
// With N/2 even the centering reduces to (-1)^p pre- and (-1)^q post-multiplication.
void centered_dft(std::vector<Complex>& data, int sign) {
  const std::size_t n = data.size();
  for (std::size_t p = 1; p < n; p += 2) data[p] = -data[p];
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                            sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (std::size_t q = 1; q < n; q += 2) data[q] = -data[q];
}

}  // namespace

FrequencyGrid::FrequencyGrid(int samples_per_unit, int half_range)
    : samples_per_unit_(samples_per_unit), half_range_(half_range), size_(0) {
  if (samples_per_unit < 2) {
    throw PreconditionError("grid: samples per unit S=" + std::to_string(samples_per_unit) +
                            " is too small to resolve window transitions (need S >= 2)");
  }
  if (half_range < 2) {
    throw PreconditionError("grid: half range Xi=" + std::to_string(half_range) +
                            " is too small (need Xi >= 2)");
  }
  const auto n = std::uint64_t{2} * static_cast<std::uint64_t>(half_range) *
                 static_cast<std::uint64_t>(samples_per_unit);
  if (!std::has_single_bit(n)) {
    throw PreconditionError("grid: point count N=2*Xi*S=" + std::to_string(n) +
                            " is not a power of two");
  }
  size_ = static_cast<std::size_t>(n);
}

std::optional<std::int64_t> FrequencyGrid::index_of(double xi) const noexcept {
  const double scaled = xi * samples_per_unit_;
  const double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled))) return std::nullopt;
  const auto index = static_cast<std::int64_t>(rounded);
  if (!contains(index)) return std::nullopt;
  return index;
}

std::optional<std::int64_t> FrequencyGrid::shift_by_integer(std::int64_t index,
                                                            std::int64_t k) const noexcept {
  const std::int64_t shifted = index + k * samples_per_unit_;
  if (!contains(shifted)) return std::nullopt;
  return shifted;
}

FrequencyGrid make_grid(int samples_per_unit, int half_range) {
  return FrequencyGrid(samples_per_unit, half_range);
}

SampledSpectrum::SampledSpectrum(FrequencyGrid grid, std::vector<Complex> values,
                                 std::string label)
    : grid_(grid), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != grid_.size()) {
    throw PreconditionError("spectrum '" + label_ + "': " + std::to_string(values_.size()) +
                            " values for a grid of " + std::to_string(grid_.size()) + " points");
  }
}

SampledSpectrum SampledSpectrum::shifted(std::int64_t k) const {
  std::vector<Complex> out(values_.size());
  const std::int64_t offset = k * grid_.samples_per_unit();
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    out[pos] = at_index(grid_.index_at(pos) + offset);
  }
  return SampledSpectrum(grid_, std::move(out), label_);
}

bool SampledSpectrum::excluded(std::int64_t index) const noexcept {
  if (!exclusion_half_width_) return false;
  const std::int64_t s = grid_.samples_per_unit();
  const std::int64_t residue = ((index % s) + s) % s;
  const double distance = std::abs(static_cast<double>(2 * residue - s)) / (2.0 * s);
  return distance <= *exclusion_half_width_ + 1e-12;
}

SampledSpectrum&& SampledSpectrum::with_hermitian(bool asserted) && {
  hermitian_ = asserted;
  return std::move(*this);
}

SampledSpectrum&& SampledSpectrum::with_exclusion(double half_width) && {
  if (!(half_width >= 0.0 && half_width < 0.5)) {
    throw PreconditionError("exclusion half-width must lie in [0, 1/2)");
  }
  exclusion_half_width_ = half_width;
  return std::move(*this);
}

SampledSpectrum&& SampledSpectrum::with_blocks(std::vector<BlockSpan> blocks) && {
  blocks_ = std::move(blocks);
  return std::move(*this);
}

SampledSignal::SampledSignal(FrequencyGrid grid, std::vector<Complex> values, std::string label)
    : grid_(grid), values_(std::move(values)), label_(std::move(label)) {
  if (values_.size() != grid_.size()) {
    throw PreconditionError("signal '" + label_ + "': value count does not match grid");
  }
}

SampledSignal to_time_domain(const SampledSpectrum& f) {
  std::vector<Complex> data(f.values().begin(), f.values().end());
  centered_dft(data, +1);
  const double scale = f.grid().spacing();
  for (auto& v : data) v *= scale;
  return SampledSignal(f.grid(), std::move(data), f.label());
}

SampledSpectrum to_freq_domain(const SampledSignal& s) {
  std::vector<Complex> data(s.values().begin(), s.values().end());
  centered_dft(data, -1);
  const double scale = s.time_spacing();
  for (auto& v : data) v *= scale;
  return SampledSpectrum(s.grid(), std::move(data), s.label());
}

double l2_norm(const SampledSpectrum& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * f.grid().spacing());
}

double l2_norm(const SampledSignal& s) {
  double sum = 0.0;
  for (const auto& v : s.values()) sum += std::norm(v);
  return std::sqrt(sum * s.time_spacing());
}

SpectralInterpolator::SpectralInterpolator(const SampledSpectrum& f) : scale_(f.grid().spacing()) {
  const auto values = f.values();
  for (std::size_t pos = 0; pos < values.size(); ++pos) {
    if (values[pos] != Complex{}) {
      frequencies_.push_back(f.grid().frequency(pos));
      values_.push_back(values[pos]);
    }
  }
}

Complex SpectralInterpolator::operator()(double x) const {
  Complex sum{};
  for (std::size_t k = 0; k < values_.size(); ++k) {
    // reduce the phase to [0, 1) cycles before scaling by 2 pi
    const double cycles = frequencies_[k] * x;
    const double phase = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
    sum += values_[k] * Complex(std::cos(phase), std::sin(phase));
  }
  return sum * scale_;
}

}  // namespace sispace
