#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "sispace/bumps.hpp"
#include "sispace/errors.hpp"
#include "sispace/generators.hpp"

namespace sispace::generators {
namespace {

constexpr int kTableHalfRange = 128;  // y spacing 1/256
constexpr double kTableReach = 64.0;

// Samples y in [-reach, reach] of the inverse transform of a window on (-1, 1).
template <class Window>
std::vector<Complex> tabulate(Window&& window, int samples_per_unit) {
  const FrequencyGrid grid(samples_per_unit, kTableHalfRange);
  std::vector<Complex> spectrum(grid.size());
  for (std::int64_t i = -samples_per_unit; i <= samples_per_unit; ++i) {
    spectrum[grid.position(i)] = window(static_cast<double>(i) / samples_per_unit);
  }
  const auto signal = to_time_domain(SampledSpectrum(grid, std::move(spectrum), "window"));
  const auto half = static_cast<std::int64_t>(kTableReach * 2 * kTableHalfRange);
  std::vector<Complex> table;
  table.reserve(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t m = -half; m <= half; ++m) table.push_back(signal.values()[grid.position(m)]);
  return table;
}

}  // namespace

InverseWindowTables::InverseWindowTables(double alpha)
    : alpha_(alpha), reach_(kTableReach), spacing_(1.0 / (2 * kTableHalfRange)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be > 0");
  // the right flank of g1 has width 2^-alpha; keep >= 256 samples across it
  const int boost = std::clamp(static_cast<int>(std::ceil(alpha)) - 2, 0, 6);
  const int samples_per_unit = 1024 << boost;
  g0_ = tabulate([](double x) { return bumps::g0(x); }, samples_per_unit);
  g1_ = tabulate([alpha](double x) { return bumps::g1(x, alpha); }, samples_per_unit);
  const auto edge = static_cast<std::size_t>(2 * kTableHalfRange);
  for (std::size_t k = 0; k <= edge; ++k) {
    for (const auto* t : {&g0_, &g1_}) {
      tail_bound_ = std::max({tail_bound_, std::abs((*t)[k]), std::abs((*t)[t->size() - 1 - k])});
    }
  }
}

std::shared_ptr<const InverseWindowTables> InverseWindowTables::for_alpha(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const InverseWindowTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<const InverseWindowTables>(alpha);
  return slot;
}

Complex InverseWindowTables::interpolate(const std::vector<Complex>& table, double y) const {
  if (!(std::abs(y) <= reach_)) return {};
  const double u = (y + reach_) / spacing_;
  const auto last = static_cast<std::int64_t>(table.size()) - 1;
  auto base = static_cast<std::int64_t>(std::floor(u));
  base = std::clamp<std::int64_t>(base, 1, last - 2);
  const double t = u - static_cast<double>(base);
  const double w[4] = {-t * (t - 1) * (t - 2) / 6.0, (t + 1) * (t - 1) * (t - 2) / 2.0,
                       -(t + 1) * t * (t - 2) / 2.0, (t + 1) * t * (t - 1) / 6.0};
  Complex sum{};
  for (int k = 0; k < 4; ++k) sum += w[k] * table[static_cast<std::size_t>(base - 1 + k)];
  return sum;
}

namespace {

Complex unit_phase(double cycles) {
  const double reduced = cycles - std::round(cycles);
  return std::polar(1.0, 2.0 * std::numbers::pi * reduced);
}

}  // namespace

Complex evaluate_psi_time(double x, const PsiParams& params, const InverseWindowTables& tables) {
  const double alpha = params.alpha;
  const double c0 = 0.5 * (1.0 - std::exp2(-alpha));
  Complex sum = c0 * tables.g0_inverse(c0 * x);
  const double denom = std::exp2(alpha) - 1.0;
  for (int j = 1; j <= params.J; ++j) {
    const double a = std::exp2(j * alpha + 1.0) / denom;
    const double c = 0.5 * (1.0 - std::exp2(-j * alpha));
    const std::int64_t count = params.block_count(j);
    const auto shift = static_cast<double>(params.n * params.block_offset(j));
    const double weight = 1.0 / (a * std::sqrt(static_cast<double>(count)));
    auto term = [&](double t) {
      // x*c and x*shift reduced separately keep the phase accurate for large shifts
      const Complex phase = unit_phase(t * c) * unit_phase(t * shift);
      return weight * tables.g1_inverse(t / a) * phase *
             geometric_phase_sum(params.n * t, count);
    };
    sum += term(x) + term(-x);
  }
  return sum;
}

PsiTimeEvaluator::PsiTimeEvaluator(PsiParams params)
    : params_(PsiParams::make(params.alpha, params.beta, params.n, params.J)),
      tables_(InverseWindowTables::for_alpha(params.alpha)) {}

double PsiTimeEvaluator::valid_reach() const {
  const double alpha = params_.alpha;
  const double c0 = 0.5 * (1.0 - std::exp2(-alpha));
  const double a1 = std::exp2(alpha + 1.0) / (std::exp2(alpha) - 1.0);
  return tables_->reach() * std::min(1.0 / c0, a1);
}

}  // namespace sispace::generators
