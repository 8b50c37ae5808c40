#include "sispace/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sispace/errors.hpp"

namespace sispace::bumps {
namespace {

double edge(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("window exponent alpha must be positive and finite");
  }
}

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = edge(x);
  const double b = edge(1.0 - x);
  const double t = a / (a + b);
  return std::sin(0.5 * std::numbers::pi * t);
}

double g0(double x) { return smooth_step(x + 1.0) * smooth_step(1.0 - x); }

double g1(double x, double alpha) {
  return smooth_step(x + 1.0) * smooth_step(1.0 - std::exp2(alpha) * x);
}

BlockWindowParams BlockWindowParams::make(double alpha, int j) {
  require_alpha(alpha);
  if (j < 0) throw PreconditionError("block index j must be nonnegative");
  return {alpha, j};
}

double h(double xi, int j, double alpha) {
  if (j == 0) return g0(2.0 * xi / (1.0 - std::exp2(-alpha)));
  const double scale = std::exp2(j * alpha);
  return g1(scale * (2.0 * xi - 1.0 + 1.0 / scale) / (std::exp2(alpha) - 1.0), alpha);
}

Interval h_support(int j, double alpha) {
  if (j == 0) {
    const double half = 0.5 * (1.0 - std::exp2(-alpha));
    return {-half, half};
  }
  return {0.5 * (1.0 - std::exp2(-(j - 1) * alpha)), 0.5 * (1.0 - std::exp2(-(j + 1) * alpha))};
}

double partition_sum(double xi, double alpha, int J) {
  const double core = h(xi, 0, alpha);
  double sum = core * core;
  for (int j = 1; j <= J; ++j) {
    const double up = h(xi, j, alpha);
    const double down = h(-xi, j, alpha);
    sum += up * up + down * down;
  }
  return sum;
}

double partition_defect(double alpha, int J, double exclusion_halfwidth, int samples_per_unit) {
  require_alpha(alpha);
  if (J < 1) throw PreconditionError("partition_defect: J must be at least 1");
  if (exclusion_halfwidth < 0.0) throw PreconditionError("exclusion half-width must be >= 0");
  const double limit = 0.5 - exclusion_halfwidth;
  const long half = samples_per_unit / 2;
  double defect = 0.0;
  for (long k = -half + 1; k < half; ++k) {
    const double xi = static_cast<double>(k) / samples_per_unit;
    if (std::abs(xi) > limit) continue;
    defect = std::max(defect, std::abs(partition_sum(xi, alpha, J) - 1.0));
  }
  return defect;
}

SmoothStepTable::SmoothStepTable(int resolution) : resolution_(resolution) {
  if (resolution < 2) throw PreconditionError("smooth-step table needs resolution >= 2");
  values_.resize(static_cast<std::size_t>(resolution) + 1);
  for (int k = 0; k <= resolution; ++k) {
    values_[static_cast<std::size_t>(k)] = smooth_step(static_cast<double>(k) / resolution);
  }
  values_.front() = 0.0;
  values_.back() = 1.0;
}

}  // namespace sispace::bumps
