#pragma once

// Time and frequency localization probes: windowed weighted norms, a growth
// verdict over geometric windows, per-block frequency peaks and the parameter
// gates under which the psi family meets the integrability conditions.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sispace/generators.hpp"
#include "sispace/grid.hpp"
#include "sispace/spectral.hpp"

namespace sispace::localization {

inline constexpr double kDefaultRelTol = 0.05;

/// |phi| on the symmetric lattice x_k = k * spacing, |k| <= K.
class MagnitudeProfile {
 public:
  MagnitudeProfile(double spacing, std::vector<double> magnitudes);

  /// Grid route: samples of a time-domain signal, trimmed to a symmetric range.
  static MagnitudeProfile from_signal(const SampledSignal& signal);
  /// Analytic route for psi; uses evenness and samples 0 <= x <= reach.
  static MagnitudeProfile from_psi(const generators::PsiTimeEvaluator& psi, double reach);
  /// Any even magnitude function sampled on 0 <= x <= reach.
  static MagnitudeProfile from_even_function(const std::function<double(double)>& magnitude,
                                             double spacing, double reach);

  double spacing() const noexcept { return spacing_; }
  double reach() const noexcept { return spacing_ * static_cast<double>(half_count_); }
  std::size_t half_count() const noexcept { return half_count_; }
  /// |phi(k * spacing)| for |k| <= half_count.
  double at(std::int64_t k) const {
    return magnitudes_[static_cast<std::size_t>(k + static_cast<std::int64_t>(half_count_))];
  }

 private:
  double spacing_;
  std::size_t half_count_;
  std::vector<double> magnitudes_;
};

/// Sample spacing that resolves |psi|^2 for the analytic route.
double analytic_probe_spacing(const generators::PsiParams& params);
/// Truncation depth for analytic probes up to t_max: at least J, and deep
/// enough that the last included block has time scale a_j >= 2 t_max.
int analytic_probe_depth(const generators::PsiParams& params, double t_max);

/// |phi| for time probes up to t_max: the analytic block formula for psi
/// (including custom spectra restored from psi metadata), the convolution
/// samples for B-splines, the inverse transform of f otherwise.
MagnitudeProfile time_profile_for(const generators::GeneratorSpec& spec, const SampledSpectrum& f,
                                  double t_max);

/// Trapezoid value of int_{|x| <= T} |phi|^p (1 + |x|)^w dx. Throws
/// PreconditionError when T exceeds the profile's reach.
double weighted_time_partial(const MagnitudeProfile& profile, double p, double w, double T);
double weighted_time_partial(const SampledSignal& signal, double p, double w, double T);

enum class Verdict { Converging, Diverging, Inconclusive };
std::string to_string(Verdict v);

struct GrowthVerdict {
  double p = 0.0;
  double w = 0.0;
  std::vector<double> windows;
  std::vector<double> partials;
  std::vector<double> tail_increments;      // W(T_{i+1}) - W(T_i)
  std::vector<double> doubling_increments;  // W(T) - W(T/2), aligned to the last window
  double fitted_slope = 0.0;                // least squares dW / d ln T
  double rel_tol = kDefaultRelTol;
  Verdict verdict = Verdict::Inconclusive;
};

/// Windows must be geometric with ratio 2^{1/k} for integer k, at least four
/// of them and spanning at least three doublings.
///   converging:  D_last <= tol * W_last, D non-increasing over the last three
///                doublings and D_first >= 2 D_last
///   diverging:   D non-decreasing (within tol) over the last three doublings,
///                D_last > 0 and D_last >= tol * W_last
GrowthVerdict divergence_probe(const MagnitudeProfile& profile, double p, double w,
                               const std::vector<double>& windows,
                               double rel_tol = kDefaultRelTol);

struct FreqNorm {
  double total = 0.0;
  double core = 0.0;                   // block 0
  std::vector<double> block_contributions;  // blocks 1 .. J, both mirror sides
};

/// Trapezoid value of int_{|xi| <= window} |f|^q (1 + |xi|)^delta dxi, split
/// by block when the spectrum carries block spans.
FreqNorm weighted_freq_norm(const SampledSpectrum& f, double q, double delta, double window);

struct FreqDecay {
  double s = 0.0;
  double sup_value = 0.0;
  double argmax = 0.0;
  std::optional<double> core_peak;
  std::vector<double> block_peaks;  // blocks 1 .. J
};

/// sup |f(xi)| (1 + |xi|)^s over the grid, and per-block peaks for block spectra.
FreqDecay pointwise_freq_decay(const SampledSpectrum& f, double s);

/// Least-squares slope of log(max |f| over [k, k+1)) against log(k + 1/2),
/// over nonzero unit bins with 2 <= k < Xi - 1.
double spectral_decay_exponent(const SampledSpectrum& f);

struct FeasibilityGate {
  double alpha = 3.0;
  double beta = 1.0;
  double gamma = 0.0;
  double delta = 0.2;
  double p = 1.0;
  double q = 1.0;
  double epsilon = 0.5;

  /// Throws PreconditionError outside gamma >= 0, delta > 0, 1 <= p < 2, q >= 1.
  void validate() const;
};

struct GateResult {
  bool time_integrability_ok;  // beta (1/p - 1/2) + alpha (p - 1 - gamma) / p > 0
  double time_integrability_margin;
  bool freq_integrability_ok;  // alpha > beta (1 + delta - q/2)
  double freq_integrability_margin;
  bool exponent_compatible;  // 1 + delta - q/2 < 1 / (2 gamma)
  double exponent_value;
  double exponent_bound;  // +inf when gamma = 0
};

GateResult feasibility_gates(const FeasibilityGate& g);

struct WitnessCheck {
  std::string tag;
  std::string statement;
  std::string outcome;  // e.g. "diverging", "bounded", "pass"
  bool consistent;      // outcome matches what the generator family predicts
  std::optional<GrowthVerdict> growth;
  std::vector<double> values;
};

struct SuiteOptions {
  std::optional<FrequencyGrid> grid;
  std::vector<double> windows{4, 8, 16, 32, 64};
  int n_max = 8;
};

struct SuiteReport {
  std::string label;
  int samples_per_unit = 0;
  int half_range = 0;
  double epsilon = 0.0;
  GateResult gates{};
  analysis::RieszBounds bounds{};
  double orthonormality_defect = 0.0;
  std::optional<std::pair<double, double>> excluded_band;
  std::string invariance_group;
  std::vector<int> invariance_passing_n;
  double spectral_decay = 0.0;
  std::vector<WitnessCheck> checks;
};

SuiteReport theorem_witness_suite(const generators::GeneratorSpec& spec, double epsilon,
                                  const FeasibilityGate& gate, const SuiteOptions& options = {});

}  // namespace sispace::localization
