#include "sispace/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sispace/bumps.hpp"
#include "sispace/errors.hpp"
#include "sispace/parallel.hpp"

namespace sispace::localization {
namespace {

using generators::PsiParams;

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Cumulative symmetric trapezoid sums C[K] = int_{-K dx}^{K dx} integrand.
class SymmetricIntegral {
 public:
  SymmetricIntegral(const MagnitudeProfile& profile, double p, double w)
      : dx_(profile.spacing()), reach_(profile.reach()) {
    const auto half = static_cast<std::int64_t>(profile.half_count());
    integrand_.resize(static_cast<std::size_t>(2 * half + 1));
    for (std::int64_t k = -half; k <= half; ++k) {
      const double x = std::abs(static_cast<double>(k) * dx_);
      integrand_[static_cast<std::size_t>(k + half)] =
          std::pow(profile.at(k), p) * std::pow(1.0 + x, w);
    }
    half_ = half;
    cumulative_.assign(static_cast<std::size_t>(half + 1), 0.0);
    for (std::int64_t k = 1; k <= half; ++k) {
      cumulative_[static_cast<std::size_t>(k)] =
          cumulative_[static_cast<std::size_t>(k - 1)] +
          0.5 * dx_ * (value(k - 1) + value(k) + value(-(k - 1)) + value(-k));
    }
  }

  double operator()(double T) const {
    if (!(T >= 0.0) || T > reach_ * (1.0 + 1e-12)) {
      throw PreconditionError("window T=" + std::to_string(T) +
                              " lies beyond the available time span " + std::to_string(reach_));
    }
    const double u = T / dx_;
    auto k = static_cast<std::int64_t>(std::floor(u + 1e-9));
    k = std::min(k, half_);
    double total = cumulative_[static_cast<std::size_t>(k)];
    const double frac = u - static_cast<double>(k);
    if (frac > 1e-9 && k < half_) {
      for (int side : {1, -1}) {
        const double a = value(side * k);
        const double b = value(side * (k + 1));
        total += 0.5 * frac * dx_ * (2.0 * a + frac * (b - a));
      }
    }
    return total;
  }

 private:
  double value(std::int64_t k) const { return integrand_[static_cast<std::size_t>(k + half_)]; }

  double dx_;
  double reach_;
  std::int64_t half_ = 0;
  std::vector<double> integrand_;
  std::vector<double> cumulative_;
};

// Number of window steps per doubling; validates the geometric layout.
int steps_per_doubling(const std::vector<double>& windows) {
  if (windows.size() < 4) throw PreconditionError("divergence probe needs at least 4 windows");
  if (!(windows[0] > 0.0)) throw PreconditionError("windows must be positive");
  const double ratio = windows[1] / windows[0];
  if (!(ratio > 1.0)) throw PreconditionError("windows must be increasing");
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (std::abs(windows[i] / windows[i - 1] - ratio) > 1e-9 * ratio) {
      throw PreconditionError("windows must be geometrically spaced");
    }
  }
  const double per = 1.0 / std::log2(ratio);
  const double k = std::round(per);
  if (k < 1.0 || std::abs(per - k) > 1e-6) {
    throw PreconditionError("window ratio must be 2^(1/k) for an integer k");
  }
  const auto steps = static_cast<int>(k);
  if ((static_cast<int>(windows.size()) - 1) / steps < 3) {
    throw PreconditionError("windows must span at least three doublings");
  }
  return steps;
}

}  // namespace

MagnitudeProfile::MagnitudeProfile(double spacing, std::vector<double> magnitudes)
    : spacing_(spacing), half_count_(magnitudes.size() / 2), magnitudes_(std::move(magnitudes)) {
  if (!(spacing > 0.0)) throw PreconditionError("profile spacing must be positive");
  if (magnitudes_.size() % 2 != 1) throw PreconditionError("profile must be symmetric (odd length)");
}

MagnitudeProfile MagnitudeProfile::from_signal(const SampledSignal& signal) {
  const auto& grid = signal.grid();
  const auto half = static_cast<std::int64_t>(grid.size() / 2) - 1;
  std::vector<double> mags(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t k = -half; k <= half; ++k) {
    mags[static_cast<std::size_t>(k + half)] = std::abs(signal.values()[grid.position(k)]);
  }
  return MagnitudeProfile(signal.time_spacing(), std::move(mags));
}

MagnitudeProfile MagnitudeProfile::from_even_function(
    const std::function<double(double)>& magnitude, double spacing, double reach) {
  const auto half = static_cast<std::int64_t>(std::ceil(reach / spacing - 1e-9));
  std::vector<double> mags(static_cast<std::size_t>(2 * half + 1));
  parallel_for(static_cast<std::size_t>(half + 1), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double v = magnitude(static_cast<double>(k) * spacing);
      mags[static_cast<std::size_t>(half) + k] = v;
      mags[static_cast<std::size_t>(half) - k] = v;
    }
  });
  return MagnitudeProfile(spacing, std::move(mags));
}

MagnitudeProfile MagnitudeProfile::from_psi(const generators::PsiTimeEvaluator& psi, double reach) {
  if (reach > psi.valid_reach()) {
    throw PreconditionError("analytic reach " + std::to_string(reach) +
                            " exceeds inverse-window table validity " +
                            std::to_string(psi.valid_reach()));
  }
  return from_even_function([&psi](double x) { return std::abs(psi(x)); },
                            analytic_probe_spacing(psi.params()), reach);
}

double analytic_probe_spacing(const PsiParams& params) {
  const double f_max = static_cast<double>(params.n * params.block_offset(params.J + 1)) + 1.0;
  return std::exp2(-std::ceil(std::log2(4.0 * f_max)));
}

int analytic_probe_depth(const PsiParams& params, double t_max) {
  const double denom = std::exp2(params.alpha) - 1.0;
  int j = 1;
  while (std::exp2(j * params.alpha + 1.0) / denom < 2.0 * t_max) ++j;
  return std::max(params.J, j);
}

MagnitudeProfile time_profile_for(const generators::GeneratorSpec& spec, const SampledSpectrum& f,
                                  double t_max) {
  if (const auto* psi = generators::psi_params_of(spec)) {
    const generators::PsiTimeEvaluator eval(psi->with_depth(analytic_probe_depth(*psi, t_max)));
    return MagnitudeProfile::from_psi(eval, t_max);
  }
  if (const auto* b = std::get_if<generators::BSpline>(&spec)) {
    return MagnitudeProfile::from_signal(generators::build_bspline(b->degree, f.grid()).signal);
  }
  return MagnitudeProfile::from_signal(to_time_domain(f));
}

double weighted_time_partial(const MagnitudeProfile& profile, double p, double w, double T) {
  if (p < 1.0) throw PreconditionError("weighted_time_partial needs p >= 1");
  return SymmetricIntegral(profile, p, w)(T);
}

double weighted_time_partial(const SampledSignal& signal, double p, double w, double T) {
  return weighted_time_partial(MagnitudeProfile::from_signal(signal), p, w, T);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converging:
      return "converging";
    case Verdict::Diverging:
      return "diverging";
    case Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

GrowthVerdict divergence_probe(const MagnitudeProfile& profile, double p, double w,
                               const std::vector<double>& windows, double rel_tol) {
  const int steps = steps_per_doubling(windows);
  const SymmetricIntegral integral(profile, p, w);
  GrowthVerdict out;
  out.p = p;
  out.w = w;
  out.windows = windows;
  out.rel_tol = rel_tol;
  for (double T : windows) out.partials.push_back(integral(T));
  for (std::size_t i = 1; i < windows.size(); ++i) {
    out.tail_increments.push_back(out.partials[i] - out.partials[i - 1]);
  }
  for (auto i = static_cast<std::int64_t>(windows.size()) - 1; i - steps >= 0; i -= steps) {
    out.doubling_increments.push_back(out.partials[static_cast<std::size_t>(i)] -
                                      out.partials[static_cast<std::size_t>(i - steps)]);
  }
  std::reverse(out.doubling_increments.begin(), out.doubling_increments.end());

  std::vector<double> logs;
  for (double T : windows) logs.push_back(std::log(T));
  out.fitted_slope = least_squares_slope(logs, out.partials);

  const auto& d = out.doubling_increments;
  const std::size_t n = d.size();
  const double last = d[n - 1];
  const double w_last = out.partials.back();
  const bool shrinking = d[n - 3] >= d[n - 2] && d[n - 2] >= d[n - 1];
  const bool holding = d[n - 2] >= (1.0 - rel_tol) * d[n - 3] &&
                       d[n - 1] >= (1.0 - rel_tol) * d[n - 2];
  if (last <= rel_tol * w_last && shrinking && d.front() >= 2.0 * last) {
    out.verdict = Verdict::Converging;
  } else if (holding && last > 0.0 && last >= rel_tol * w_last) {
    out.verdict = Verdict::Diverging;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

FreqNorm weighted_freq_norm(const SampledSpectrum& f, double q, double delta, double window) {
  const auto& grid = f.grid();
  if (q < 1.0) throw PreconditionError("weighted_freq_norm needs q >= 1");
  if (!(window > 0.0) || window > grid.half_range()) {
    throw PreconditionError("frequency window must lie in (0, Xi]");
  }
  const double dxi = grid.spacing();
  const double edge = window * grid.samples_per_unit();
  auto term = [&](std::int64_t i) {
    const double a = std::abs(static_cast<double>(i));
    if (a > edge + 1e-9) return 0.0;
    const double weight = std::abs(a - edge) < 1e-9 ? 0.5 : 1.0;
    const double xi = static_cast<double>(i) * dxi;
    return weight * dxi * std::pow(std::abs(f.at_index(i)), q) * std::pow(1.0 + std::abs(xi), delta);
  };
  FreqNorm out;
  for (std::size_t pos = 0; pos < grid.size(); ++pos) out.total += term(grid.index_at(pos));
  for (const auto& span : f.blocks()) {
    double sum = 0.0;
    for (std::int64_t i = span.first; i <= span.last; ++i) {
      sum += term(i);
      if (span.block != 0) sum += term(-i);
    }
    if (span.block == 0) {
      out.core = sum;
    } else {
      out.block_contributions.push_back(sum);
    }
  }
  return out;
}

FreqDecay pointwise_freq_decay(const SampledSpectrum& f, double s) {
  const auto& grid = f.grid();
  auto weighted = [&](std::int64_t i) {
    const double xi = static_cast<double>(i) * grid.spacing();
    return std::abs(f.at_index(i)) * std::pow(1.0 + std::abs(xi), s);
  };
  FreqDecay out;
  out.s = s;
  for (std::size_t pos = 0; pos < grid.size(); ++pos) {
    const double v = weighted(grid.index_at(pos));
    if (v > out.sup_value) {
      out.sup_value = v;
      out.argmax = grid.frequency(pos);
    }
  }
  for (const auto& span : f.blocks()) {
    double peak = 0.0;
    for (std::int64_t i = span.first; i <= span.last; ++i) {
      peak = std::max({peak, weighted(i), weighted(-i)});
    }
    if (span.block == 0) {
      out.core_peak = peak;
    } else {
      out.block_peaks.push_back(peak);
    }
  }
  return out;
}

double spectral_decay_exponent(const SampledSpectrum& f) {
  const auto& grid = f.grid();
  const std::int64_t s = grid.samples_per_unit();
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::int64_t k = 2; k < grid.half_range() - 1; ++k) {
    double peak = 0.0;
    for (std::int64_t i = k * s; i < (k + 1) * s; ++i) peak = std::max(peak, std::abs(f.at_index(i)));
    if (peak > 1e-290) {
      lx.push_back(std::log(static_cast<double>(k) + 0.5));
      ly.push_back(std::log(peak));
    }
  }
  return least_squares_slope(lx, ly);
}

void FeasibilityGate::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw PreconditionError("gate: alpha, beta must be > 0");
  if (!(gamma >= 0.0)) throw PreconditionError("gate: gamma must be >= 0");
  if (!(delta > 0.0)) throw PreconditionError("gate: delta must be > 0");
  if (!(p >= 1.0 && p < 2.0)) throw PreconditionError("gate: p must lie in [1, 2)");
  if (!(q >= 1.0) || !std::isfinite(q)) throw PreconditionError("gate: q must lie in [1, inf)");
}

GateResult feasibility_gates(const FeasibilityGate& g) {
  g.validate();
  GateResult r{};
  r.time_integrability_margin = g.beta * (1.0 / g.p - 0.5) + g.alpha * (g.p - 1.0 - g.gamma) / g.p;
  r.time_integrability_ok = r.time_integrability_margin > 0.0;
  r.freq_integrability_margin = g.alpha - g.beta * (1.0 + g.delta - g.q / 2.0);
  r.freq_integrability_ok = r.freq_integrability_margin > 0.0;
  r.exponent_value = 1.0 + g.delta - g.q / 2.0;
  r.exponent_bound =
      g.gamma == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / (2.0 * g.gamma);
  r.exponent_compatible = r.exponent_value < r.exponent_bound;
  return r;
}

namespace {

WitnessCheck growth_check(std::string tag, std::string statement, GrowthVerdict growth,
                          std::optional<Verdict> expected) {
  WitnessCheck c;
  c.tag = std::move(tag);
  c.statement = std::move(statement);
  c.outcome = to_string(growth.verdict);
  c.consistent = !expected || growth.verdict == *expected;
  c.values = growth.partials;
  c.growth = std::move(growth);
  return c;
}

WitnessCheck open_case(std::string tag, std::string statement) {
  WitnessCheck c;
  c.tag = std::move(tag);
  c.statement = std::move(statement);
  c.outcome = "inconclusive-open-case";
  c.consistent = true;
  return c;
}

}  // namespace

SuiteReport theorem_witness_suite(const generators::GeneratorSpec& spec, double epsilon,
                                  const FeasibilityGate& gate, const SuiteOptions& options) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0) throw PreconditionError("epsilon must lie in [0, 1)");
  const auto* psi = generators::psi_params_of(spec);
  const bool compact = std::holds_alternative<generators::BSpline>(spec);

  FeasibilityGate effective = gate;
  if (psi) {
    effective.alpha = psi->alpha;
    effective.beta = psi->beta;
  }

  const FrequencyGrid grid = options.grid ? *options.grid : generators::auto_grid(spec);
  const SampledSpectrum f = generators::build_spectrum(spec, grid);

  SuiteReport report;
  report.label = f.label();
  report.samples_per_unit = grid.samples_per_unit();
  report.half_range = grid.half_range();
  report.epsilon = epsilon;
  report.gates = feasibility_gates(effective);

  const auto profile = analysis::periodization(f);
  report.bounds = analysis::riesz_bounds(profile);
  report.orthonormality_defect = analysis::orthonormality_defect(profile);
  report.excluded_band = profile.excluded_band();
  const auto group =
      analysis::detect_invariance_group(f, std::min(options.n_max, grid.half_range() / 2));
  report.invariance_group = group.describe();
  report.invariance_passing_n = group.passing_n;
  report.spectral_decay = spectral_decay_exponent(f);

  const double t_max = *std::max_element(options.windows.begin(), options.windows.end());
  const MagnitudeProfile time = time_profile_for(spec, f, t_max);
  auto probe = [&](double p, double w) { return divergence_probe(time, p, w, options.windows); };

  const bool beyond_integers = group.kind != analysis::InvarianceKind::Integers;
  std::optional<Verdict> l1_expect;
  if (group.kind == analysis::InvarianceKind::RealCandidate) l1_expect = Verdict::Diverging;
  if (compact) l1_expect = Verdict::Converging;
  report.checks.push_back(growth_check(
      "l1_obstruction", "a translation-invariant (band-limited) generator is not integrable",
      probe(1.0, 0.0), l1_expect));

  if (epsilon == 0.0) {
    report.checks.push_back(open_case(
        "time_moment_divergence", "int |phi|^2 |x|^{1+eps} = inf for (1/n)Z-invariant spaces"));
    report.checks.push_back(open_case(
        "time_moment_convergence", "int |phi|^2 (1+|x|)^{1-eps} < inf is attainable"));
  } else {
    report.checks.push_back(growth_check(
        "time_moment_divergence", "int |phi|^2 |x|^{1+eps} = inf for (1/n)Z-invariant spaces",
        probe(2.0, 1.0 + epsilon),
        beyond_integers ? std::optional(Verdict::Diverging)
                        : (compact ? std::optional(Verdict::Converging) : std::nullopt)));
    report.checks.push_back(growth_check(
        "time_moment_convergence", "int |phi|^2 (1+|x|)^{1-eps} < inf is attainable",
        probe(2.0, 1.0 - epsilon),
        (psi || compact) ? std::optional(Verdict::Converging) : std::nullopt));
  }

  const auto bounded = pointwise_freq_decay(f, 0.5);
  {
    WitnessCheck c;
    c.tag = "pointwise_frequency_bound";
    c.statement = "sup |phihat(xi)| |xi|^{1/2} < inf";
    c.values = bounded.block_peaks.empty() ? std::vector<double>{bounded.sup_value}
                                           : bounded.block_peaks;
    if (bounded.block_peaks.size() >= 2) {
      const auto& bp = bounded.block_peaks;
      const bool ok = bp.back() <= 1.25 * bp[bp.size() - 2];
      c.outcome = ok ? "bounded" : "growing";
      c.consistent = !psi || ok;
    } else {
      c.outcome = "sup=" + std::to_string(bounded.sup_value);
      c.consistent = true;
    }
    report.checks.push_back(std::move(c));
  }
  if (epsilon > 0.0) {
    const auto growing = pointwise_freq_decay(f, 0.5 + epsilon);
    WitnessCheck c;
    c.tag = "pointwise_frequency_growth";
    c.statement = "sup |phihat(xi)| |xi|^{1/2+eps} = inf for (1/n)Z-invariant spaces";
    c.values = growing.block_peaks.empty() ? std::vector<double>{growing.sup_value}
                                           : growing.block_peaks;
    if (growing.block_peaks.size() >= 2) {
      const auto& bp = growing.block_peaks;
      const bool up = bp.back() > bp[bp.size() - 2];
      c.outcome = up ? "growing" : "not-growing";
      c.consistent = !beyond_integers || up;
    } else {
      c.outcome = "sup=" + std::to_string(growing.sup_value);
      c.consistent = true;
    }
    report.checks.push_back(std::move(c));
  }

  if (psi) {
    const bool gates_ok = report.gates.time_integrability_ok &&
                          report.gates.freq_integrability_ok && report.gates.exponent_compatible;
    report.checks.push_back(growth_check(
        "time_integrability", "int |phi| (1+|x|)^gamma < inf", probe(1.0, effective.gamma),
        gates_ok ? std::optional(Verdict::Converging) : std::nullopt));

    const auto norm = weighted_freq_norm(f, effective.q, effective.delta, grid.half_range());
    WitnessCheck c;
    c.tag = "frequency_integrability";
    c.statement = "int |phihat|^q (1+|xi|)^delta < inf";
    c.values = norm.block_contributions;
    const auto& b = norm.block_contributions;
    const bool summable = b.size() >= 2 && b.back() < b[b.size() - 2];
    c.outcome = summable ? "summable" : "growing";
    c.consistent = !gates_ok || summable;
    report.checks.push_back(std::move(c));
  }

  {
    WitnessCheck c;
    c.tag = "spectral_decay_fit";
    c.statement = "log-log slope of unit-bin spectral peaks";
    c.outcome = std::isfinite(report.spectral_decay) ? "fitted" : "no-tail";
    c.consistent = true;
    c.values = {report.spectral_decay};
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace sispace::localization
