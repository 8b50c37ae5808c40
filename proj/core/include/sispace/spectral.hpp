#pragma once

// Grid versions of the shift-invariant space criteria:
//   Riesz / orthonormal generator   via G(xi) = sum_k |f(xi + k)|^2
//   translation invariance          f(xi) f(xi + k) = 0 for k != 0
//   (1/n)Z invariance               exactly one class vector Phi_m(xi) nonzero
// "Almost everywhere" becomes "at every grid point outside the exclusion band".

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sispace/grid.hpp"

namespace sispace::analysis {

/// Magnitude above which a sample or class vector counts as nonzero.
inline constexpr double kActiveThreshold = 1e-12;
/// Default lower Riesz bound below which a generator is rejected.
inline constexpr double kRieszThreshold = 1e-6;

struct PeriodizationProfile {
  int samples_per_unit = 0;
  std::vector<double> values;  // G(r / S), r = 0 .. S-1
  std::vector<char> excluded;  // 1 where r / S lies in the exclusion band
  double m = 0.0;
  double M = 0.0;
  std::optional<double> exclusion_half_width;

  double frequency(std::size_t r) const { return static_cast<double>(r) / samples_per_unit; }
  std::size_t excluded_count() const;
  /// [1/2 - w, 1/2 + w] when an exclusion is attached.
  std::optional<std::pair<double, double>> excluded_band() const;
};

PeriodizationProfile periodization(const SampledSpectrum& f);

struct RieszBounds {
  double m;
  double M;
  bool is_riesz;
  double threshold;
};

RieszBounds riesz_bounds(const PeriodizationProfile& p, double threshold = kRieszThreshold);

/// max |G - 1| over non-excluded grid points.
double orthonormality_defect(const PeriodizationProfile& p);

/// a(k) = (1/S) sum_r G(r/S) e^{-2 pi i k r / S} for k = -K .. K (entry k + K).
/// Excluded samples are replaced by periodic linear interpolation between the
/// nearest non-excluded neighbours. Throws PreconditionError if K >= S/2.
std::vector<Complex> gram_coefficients(const PeriodizationProfile& p, int K);
std::vector<Complex> gram_coefficients(const SampledSpectrum& f, int K);

struct TranslationDefect {
  double defect;                 // max over xi of the two largest |f(xi + k)| multiplied
  std::optional<double> witness;  // an xi in [0, 1) with two active shifts
  bool passes;
};

TranslationDefect translation_invariance_defect(const SampledSpectrum& f);

struct InvarianceReport {
  int n = 0;
  std::vector<int> active_counts;  // per r / S; -1 marks excluded points
  std::size_t evaluated_points = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  std::optional<double> first_violation;
  bool pass = false;
};

/// ||Phi_m(r/S)||^2 for m = 0 .. n-1.
std::vector<double> class_energies(const SampledSpectrum& f, int n, std::size_t r);

/// Requires 2 <= n <= Xi/2.
InvarianceReport n_invariance_report(const SampledSpectrum& f, int n);

enum class InvarianceKind { Integers, Fractional, RealCandidate };

struct InvarianceGroup {
  InvarianceKind kind = InvarianceKind::Integers;
  std::vector<int> passing_n;
  int maximal_n = 1;
  TranslationDefect translation{};
  std::vector<InvarianceReport> reports;  // n = 2 .. n_max

  /// "Z", "(1/4)Z" or "R-candidate".
  std::string describe() const;
};

InvarianceGroup detect_invariance_group(const SampledSpectrum& f, int n_max);

}  // namespace sispace::analysis
