#pragma once

// Generator families: sinc, centered-at-1/2 B-splines and the psi family.
//
// psi spectrum (truncated at block J):
//   psihat(xi) = h_0(xi) + sum_{j=1..J} sum_{l<beta_j} beta_j^{-1/2}
//                  [ h_j(xi - n(gamma_j + l)) + h_j(-xi - n(gamma_j + l)) ]
// with beta_j = ceil(2^{j beta}) and gamma_j = beta_0 + ... + beta_{j-1}.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sispace/grid.hpp"

namespace sispace::generators {

inline constexpr int kMaxBSplineDegree = 25;
/// Largest grid the automatic sizing rule will produce.
inline constexpr std::size_t kMaxAutoGridPoints = std::size_t{1} << 25;

struct PsiParams {
  double alpha = 1.0;
  double beta = 2.0;
  int n = 2;
  int J = 5;

  /// Throws PreconditionError unless alpha, beta > 0, n >= 2 and J >= 1.
  static PsiParams make(double alpha, double beta, int n, int J);

  /// beta_j = ceil(2^{j beta}); an exact power of two when j*beta is integral.
  std::int64_t block_count(int j) const;
  /// gamma_j = sum_{k<j} beta_k, gamma_0 = 0.
  std::int64_t block_offset(int j) const;
  /// beta_0 .. beta_last and gamma_0 .. gamma_last.
  std::vector<std::int64_t> block_counts(int last) const;
  std::vector<std::int64_t> block_offsets(int last) const;

  /// Half-width of the band around 1/2 + Z not yet covered by blocks 0..J.
  double exclusion_half_width() const;
  /// Smallest Xi holding every block of the truncation with a one-unit margin.
  std::int64_t required_half_range() const;

  PsiParams with_depth(int depth) const {
    PsiParams p = *this;
    p.J = depth;
    return p;
  }

  friend bool operator==(const PsiParams&, const PsiParams&) = default;
};

struct Sinc {
  friend bool operator==(const Sinc&, const Sinc&) = default;
};
struct BSpline {
  int degree = 1;
  friend bool operator==(const BSpline&, const BSpline&) = default;
};
/// A spectrum supplied by the user (typically re-ingested construct output).
struct Custom {
  std::shared_ptr<const SampledSpectrum> spectrum;
  std::string source;
  std::optional<PsiParams> psi;  // restored from metadata when known
};

using GeneratorSpec = std::variant<Sinc, BSpline, PsiParams, Custom>;

/// psi parameters of a psi spec, or of a custom spec restored from psi metadata.
const PsiParams* psi_params_of(const GeneratorSpec& spec);

/// Stable short identifier: "sinc", "bspline3", "psi_a1_b2_n2_J5", "custom".
std::string label_of(const GeneratorSpec& spec);
/// Validates family-specific constraints (degree cap, psi domains, margin rule).
void validate(const GeneratorSpec& spec);

/// Indicator of [-1/2, 1/2] with value 1/2 at the two endpoints.
SampledSpectrum build_sinc(const FrequencyGrid& grid);

struct BSplineSamples {
  SampledSignal signal;
  SampledSpectrum spectrum;
};

/// (e^{-pi i xi} sinc(xi))^{degree + 1}.
Complex bspline_spectrum_value(int degree, double xi);
/// Time samples by iterated convolution, spectrum by the closed form.
BSplineSamples build_bspline(int degree, const FrequencyGrid& grid);

/// Throws GridTooSmallError when Xi < required_half_range().
SampledSpectrum build_psi_spectrum(const PsiParams& params, const FrequencyGrid& grid);

struct GridPlan {
  int samples_per_unit;
  int half_range;
  std::string reason;
};

GridPlan plan_psi_grid(const PsiParams& params);
/// Sizing rule per family; Custom returns the spectrum's own grid.
GridPlan plan_grid(const GeneratorSpec& spec);
FrequencyGrid auto_grid(const GeneratorSpec& spec);

/// Spectrum of any family on the given grid.
SampledSpectrum build_spectrum(const GeneratorSpec& spec, const FrequencyGrid& grid);

/// Throws PreconditionError if more than 1e-6 of the energy lies in the outer
/// unit band of the grid.
void check_margin(const SampledSpectrum& f);

/// sin(count pi theta) / sin(pi theta), with the limit value +-count at integers.
double dirichlet_ratio(double theta, std::int64_t count);
/// sum_{l < count} e^{2 pi i theta l}.
Complex geometric_phase_sum(double theta, std::int64_t count);

/// Tabulated inverse transforms of g0 and g1 (for one alpha) on |y| <= reach,
/// evaluated by 4-point Lagrange interpolation; zero outside the table.
class InverseWindowTables {
 public:
  explicit InverseWindowTables(double alpha);

  /// Shared, lazily built instance per alpha.
  static std::shared_ptr<const InverseWindowTables> for_alpha(double alpha);

  double alpha() const noexcept { return alpha_; }
  double reach() const noexcept { return reach_; }
  double spacing() const noexcept { return spacing_; }
  /// Largest table magnitude within one unit of the edge; bounds what is dropped.
  double tail_bound() const noexcept { return tail_bound_; }

  Complex g0_inverse(double y) const { return interpolate(g0_, y); }
  Complex g1_inverse(double y) const { return interpolate(g1_, y); }

 private:
  Complex interpolate(const std::vector<Complex>& table, double y) const;

  double alpha_;
  double reach_;
  double spacing_;
  double tail_bound_ = 0.0;
  std::vector<Complex> g0_;
  std::vector<Complex> g1_;
};

/// psi(x) from the block formula
///   c0 g0v(c0 x) + sum_j beta_j^{-1/2} a_j^{-1} g1v(x / a_j)
///                   e^{2 pi i x (c_j + n gamma_j)} D_j(n x)  + mirror,
/// with c0 = (1 - 2^-alpha)/2, a_j = 2^{j alpha + 1}/(2^alpha - 1),
/// c_j = (1 - 2^{-j alpha})/2 and D_j the beta_j-term geometric phase sum.
Complex evaluate_psi_time(double x, const PsiParams& params, const InverseWindowTables& tables);

class PsiTimeEvaluator {
 public:
  explicit PsiTimeEvaluator(PsiParams params);

  const PsiParams& params() const noexcept { return params_; }
  const InverseWindowTables& tables() const noexcept { return *tables_; }
  /// |x| up to which every block's window argument stays inside the table.
  double valid_reach() const;

  Complex operator()(double x) const { return evaluate_psi_time(x, params_, *tables_); }

 private:
  PsiParams params_;
  std::shared_ptr<const InverseWindowTables> tables_;
};

}  // namespace sispace::generators
