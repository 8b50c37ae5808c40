#pragma once

// Smooth quadratic-partition step and the block windows built from it.
//
//   g(x)  = sin(pi/2 * t(x)),   t(x) = e(x) / (e(x) + e(1 - x)),   e(x) = exp(-1/x) for x > 0
//   g0(x) = g(x + 1) g(1 - x)                       support (-1, 1)
//   g1(x) = g(x + 1) g(1 - 2^alpha x)               support (-1, 2^-alpha)
//   h_0(xi) = g0(2 xi / (1 - 2^-alpha))
//   h_j(xi) = g1(2^{j alpha} (2 xi - 1 + 2^{-j alpha}) / (2^alpha - 1)),  j >= 1
//
// g(x)^2 + g(1 - x)^2 = 1 holds identically since t(1 - x) = 1 - t(x).

#include <vector>

namespace sispace::bumps {

/// Values with magnitude at or below this are treated as outside a support.
inline constexpr double kSupportThreshold = 1e-14;

double smooth_step(double x);
double g0(double x);
double g1(double x, double alpha);

struct BlockWindowParams {
  double alpha;
  int j;

  /// Throws PreconditionError unless alpha > 0 and j >= 0.
  static BlockWindowParams make(double alpha, int j);
};

/// Open interval (lo, hi).
struct Interval {
  double lo;
  double hi;
  double width() const noexcept { return hi - lo; }
};

double h(double xi, int j, double alpha);
inline double h(double xi, const BlockWindowParams& p) { return h(xi, p.j, p.alpha); }

/// Closed-form support of h_j.
Interval h_support(int j, double alpha);

/// H_J(xi) = h_0(xi)^2 + sum_{j=1..J} (h_j(xi)^2 + h_j(-xi)^2).
double partition_sum(double xi, double alpha, int J);

/// max |H_J(xi) - 1| over the lattice xi = k / samples_per_unit inside
/// (-1/2, 1/2), skipping |xi| > 1/2 - exclusion_halfwidth.
double partition_defect(double alpha, int J, double exclusion_halfwidth,
                        int samples_per_unit = 1 << 16);

/// Tabulated g on [0, 1] with the endpoints pinned; used by test fixtures.
class SmoothStepTable {
 public:
  explicit SmoothStepTable(int resolution);

  int resolution() const noexcept { return resolution_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(int k) const { return values_.at(static_cast<std::size_t>(k)); }

 private:
  int resolution_;
  std::vector<double> values_;
};

}  // namespace sispace::bumps
