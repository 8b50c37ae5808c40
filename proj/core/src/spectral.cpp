#include "sispace/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sispace/errors.hpp"
#include "sispace/parallel.hpp"

namespace sispace::analysis {
namespace {

// Calls visit(k, value) for every integer shift k with r/S + k on the grid.
template <class Visit>
void for_each_shift(const SampledSpectrum& f, std::size_t r, Visit&& visit) {
  const auto& grid = f.grid();
  const std::int64_t s = grid.samples_per_unit();
  const std::int64_t xi = grid.half_range();
  for (std::int64_t k = -xi; k < xi; ++k) {
    visit(k, f.at_index(static_cast<std::int64_t>(r) + k * s));
  }
}

}  // namespace

std::size_t PeriodizationProfile::excluded_count() const {
  return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), 1));
}

std::optional<std::pair<double, double>> PeriodizationProfile::excluded_band() const {
  if (!exclusion_half_width) return std::nullopt;
  return std::make_pair(0.5 - *exclusion_half_width, 0.5 + *exclusion_half_width);
}

PeriodizationProfile periodization(const SampledSpectrum& f) {
  PeriodizationProfile p;
  const auto s = static_cast<std::size_t>(f.grid().samples_per_unit());
  p.samples_per_unit = static_cast<int>(s);
  p.values.assign(s, 0.0);
  p.excluded.assign(s, 0);
  p.exclusion_half_width = f.exclusion_half_width();
  parallel_for(s, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double sum = 0.0;
      for_each_shift(f, r, [&](std::int64_t, Complex v) { sum += std::norm(v); });
      p.values[r] = sum;
      p.excluded[r] = f.excluded(static_cast<std::int64_t>(r)) ? 1 : 0;
    }
  });
  bool any = false;
  for (std::size_t r = 0; r < s; ++r) {
    if (p.excluded[r]) continue;
    p.m = any ? std::min(p.m, p.values[r]) : p.values[r];
    p.M = any ? std::max(p.M, p.values[r]) : p.values[r];
    any = true;
  }
  return p;
}

RieszBounds riesz_bounds(const PeriodizationProfile& p, double threshold) {
  return {p.m, p.M, p.m > threshold, threshold};
}

double orthonormality_defect(const PeriodizationProfile& p) {
  double defect = 0.0;
  for (std::size_t r = 0; r < p.values.size(); ++r) {
    if (!p.excluded[r]) defect = std::max(defect, std::abs(p.values[r] - 1.0));
  }
  return defect;
}

std::vector<Complex> gram_coefficients(const PeriodizationProfile& p, int K) {
  const int s = p.samples_per_unit;
  if (K < 0 || 2 * K >= s) {
    throw PreconditionError("gram_coefficients: K=" + std::to_string(K) +
                            " must satisfy 0 <= K < S/2 = " + std::to_string(s / 2));
  }
  std::vector<double> g = p.values;
  const auto n = static_cast<std::int64_t>(g.size());
  if (p.excluded_count() == g.size()) {
    throw PreconditionError("gram_coefficients: every grid point is excluded");
  }
  // fill each excluded run linearly between its neighbours (periodic in r)
  for (std::int64_t r = 0; r < n; ++r) {
    if (!p.excluded[static_cast<std::size_t>(r)]) continue;
    std::int64_t lo = r;
    while (p.excluded[static_cast<std::size_t>(((lo % n) + n) % n)]) --lo;
    std::int64_t hi = r;
    while (p.excluded[static_cast<std::size_t>(hi % n)]) ++hi;
    const double a = p.values[static_cast<std::size_t>(((lo % n) + n) % n)];
    const double b = p.values[static_cast<std::size_t>(hi % n)];
    const double t = static_cast<double>(r - lo) / static_cast<double>(hi - lo);
    g[static_cast<std::size_t>(r)] = a + t * (b - a);
  }
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(2 * K + 1));
  for (int k = -K; k <= K; ++k) {
    Complex sum{};
    for (std::int64_t r = 0; r < n; ++r) {
      // k*r reduced mod S keeps the phase exact
      const std::int64_t turns = ((static_cast<std::int64_t>(k) * r) % s + s) % s;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(turns) / s;
      sum += g[static_cast<std::size_t>(r)] * Complex(std::cos(phase), std::sin(phase));
    }
    out.push_back(sum / static_cast<double>(s));
  }
  return out;
}

std::vector<Complex> gram_coefficients(const SampledSpectrum& f, int K) {
  return gram_coefficients(periodization(f), K);
}

TranslationDefect translation_invariance_defect(const SampledSpectrum& f) {
  const auto s = static_cast<std::size_t>(f.grid().samples_per_unit());
  std::vector<double> products(s, 0.0);
  std::vector<char> offending(s, 0);
  parallel_for(s, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      if (f.excluded(static_cast<std::int64_t>(r))) continue;
      double top = 0.0;
      double second = 0.0;
      int active = 0;
      for_each_shift(f, r, [&](std::int64_t, Complex v) {
        const double a = std::abs(v);
        if (a > kActiveThreshold) ++active;
        if (a > top) {
          second = top;
          top = a;
        } else if (a > second) {
          second = a;
        }
      });
      products[r] = top * second;
      offending[r] = active > 1 ? 1 : 0;
    }
  });
  TranslationDefect out{0.0, std::nullopt, true};
  for (std::size_t r = 0; r < s; ++r) {
    out.defect = std::max(out.defect, products[r]);
    if (offending[r] && !out.witness) {
      out.witness = static_cast<double>(r) / static_cast<double>(s);
      out.passes = false;
    }
  }
  return out;
}

std::vector<double> class_energies(const SampledSpectrum& f, int n, std::size_t r) {
  std::vector<double> energy(static_cast<std::size_t>(n), 0.0);
  for_each_shift(f, r, [&](std::int64_t k, Complex v) {
    energy[static_cast<std::size_t>(((k % n) + n) % n)] += std::norm(v);
  });
  return energy;
}

InvarianceReport n_invariance_report(const SampledSpectrum& f, int n) {
  if (n < 2 || n > f.grid().half_range() / 2) {
    throw PreconditionError("invariance test needs 2 <= n <= Xi/2 (n=" + std::to_string(n) +
                            ", Xi=" + std::to_string(f.grid().half_range()) + ")");
  }
  const auto s = static_cast<std::size_t>(f.grid().samples_per_unit());
  InvarianceReport rep;
  rep.n = n;
  rep.active_counts.assign(s, -1);
  std::vector<char> violated(s, 0);
  parallel_for(s, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      if (f.excluded(static_cast<std::int64_t>(r))) continue;
      const auto energy = class_energies(f, n, r);
      int count = 0;
      double total = 0.0;
      for (double e : energy) {
        total += e;
        if (std::sqrt(e) > kActiveThreshold) ++count;
      }
      rep.active_counts[r] = count;
      // an all-zero fibre is only a violation if G itself is nonzero there
      violated[r] = (count > 1 || (count == 0 && std::sqrt(total) > kActiveThreshold)) ? 1 : 0;
    }
  });
  for (std::size_t r = 0; r < s; ++r) {
    if (rep.active_counts[r] < 0) continue;
    ++rep.evaluated_points;
    if (violated[r]) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = static_cast<double>(r) / static_cast<double>(s);
    }
  }
  rep.violation_fraction =
      rep.evaluated_points ? static_cast<double>(rep.violations) / rep.evaluated_points : 0.0;
  rep.pass = rep.violations == 0;
  return rep;
}

std::string InvarianceGroup::describe() const {
  switch (kind) {
    case InvarianceKind::RealCandidate:
      return "R-candidate";
    case InvarianceKind::Fractional:
      return "(1/" + std::to_string(maximal_n) + ")Z";
    case InvarianceKind::Integers:
      break;
  }
  return "Z";
}

InvarianceGroup detect_invariance_group(const SampledSpectrum& f, int n_max) {
  if (n_max < 2 || n_max > f.grid().half_range() / 2) {
    throw PreconditionError("n_max must satisfy 2 <= n_max <= Xi/2 (Xi=" +
                            std::to_string(f.grid().half_range()) + ")");
  }
  InvarianceGroup group;
  group.translation = translation_invariance_defect(f);
  for (int n = 2; n <= n_max; ++n) {
    group.reports.push_back(n_invariance_report(f, n));
    if (group.reports.back().pass) {
      group.passing_n.push_back(n);
      group.maximal_n = n;
    }
  }
  if (group.translation.passes) {
    group.kind = InvarianceKind::RealCandidate;
  } else if (!group.passing_n.empty()) {
    group.kind = InvarianceKind::Fractional;
  }
  return group;
}

}  // namespace sispace::analysis
