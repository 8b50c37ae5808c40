#include "sispace/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sispace/bumps.hpp"
#include "sispace/errors.hpp"

namespace sispace::generators {
namespace {

constexpr double kPi = std::numbers::pi;

int next_pow2(std::int64_t v) {
  if (v < 2) return 2;
  const auto p = std::bit_ceil(static_cast<std::uint64_t>(v));
  if (p > (std::uint64_t{1} << 30)) throw PreconditionError("grid dimension overflows int");
  return static_cast<int>(p);
}

std::string fmt_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double sinc(double xi) {
  if (xi == 0.0) return 1.0;
  return std::sin(kPi * xi) / (kPi * xi);
}

}  // namespace

PsiParams PsiParams::make(double alpha, double beta, int n, int J) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("psi: alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("psi: beta must be > 0");
  if (n < 2) throw PreconditionError("psi: n must be >= 2");
  if (J < 1) throw PreconditionError("psi: truncation depth J must be >= 1");
  return {alpha, beta, n, J};
}

std::int64_t PsiParams::block_count(int j) const {
  if (j < 0) throw PreconditionError("block index must be nonnegative");
  const double e = j * beta;
  if (e > 52.0) throw PreconditionError("block count 2^(j*beta) exceeds exact integer range");
  const double rounded = std::round(e);
  if (std::abs(e - rounded) < 1e-12) return std::int64_t{1} << static_cast<int>(rounded);
  return static_cast<std::int64_t>(std::ceil(std::exp2(e)));
}

std::int64_t PsiParams::block_offset(int j) const {
  std::int64_t sum = 0;
  for (int k = 0; k < j; ++k) sum += block_count(k);
  return sum;
}

std::vector<std::int64_t> PsiParams::block_counts(int last) const {
  std::vector<std::int64_t> out;
  for (int j = 0; j <= last; ++j) out.push_back(block_count(j));
  return out;
}

std::vector<std::int64_t> PsiParams::block_offsets(int last) const {
  std::vector<std::int64_t> out;
  for (int j = 0; j <= last; ++j) out.push_back(block_offset(j));
  return out;
}

double PsiParams::exclusion_half_width() const { return std::exp2(-J * alpha) / 2.0; }

std::int64_t PsiParams::required_half_range() const {
  return static_cast<std::int64_t>(n) * block_offset(J + 1) + 1;
}

const PsiParams* psi_params_of(const GeneratorSpec& spec) {
  if (const auto* p = std::get_if<PsiParams>(&spec)) return p;
  if (const auto* c = std::get_if<Custom>(&spec); c && c->psi) return &*c->psi;
  return nullptr;
}

std::string label_of(const GeneratorSpec& spec) {
  struct {
    std::string operator()(const Sinc&) const { return "sinc"; }
    std::string operator()(const BSpline& b) const { return "bspline" + std::to_string(b.degree); }
    std::string operator()(const PsiParams& p) const {
      return "psi_a" + fmt_number(p.alpha) + "_b" + fmt_number(p.beta) + "_n" +
             std::to_string(p.n) + "_J" + std::to_string(p.J);
    }
    std::string operator()(const Custom& c) const {
      return c.spectrum ? "custom:" + c.spectrum->label() : "custom";
    }
  } visitor;
  return std::visit(visitor, spec);
}

void validate(const GeneratorSpec& spec) {
  if (const auto* b = std::get_if<BSpline>(&spec)) {
    if (b->degree < 0 || b->degree > kMaxBSplineDegree) {
      throw PreconditionError("bspline degree " + std::to_string(b->degree) +
                              " outside [0, " + std::to_string(kMaxBSplineDegree) + "]");
    }
  } else if (const auto* p = std::get_if<PsiParams>(&spec)) {
    PsiParams::make(p->alpha, p->beta, p->n, p->J);
  } else if (const auto* c = std::get_if<Custom>(&spec)) {
    if (!c->spectrum) throw PreconditionError("custom generator has no spectrum");
    check_margin(*c->spectrum);
  }
}

SampledSpectrum build_sinc(const FrequencyGrid& grid) {
  std::vector<Complex> values(grid.size());
  const std::int64_t edge = grid.samples_per_unit() / 2;
  for (std::int64_t i = -edge; i <= edge; ++i) {
    values[grid.position(i)] = (i == -edge || i == edge) ? 0.5 : 1.0;
  }
  return SampledSpectrum(grid, std::move(values), "sinc").with_hermitian(true).with_exclusion(0.0);
}

Complex bspline_spectrum_value(int degree, double xi) {
  const Complex base = std::polar(sinc(xi), -kPi * xi);
  return std::pow(base, degree + 1);
}

BSplineSamples build_bspline(int degree, const FrequencyGrid& grid) {
  validate(BSpline{degree});
  if (degree + 1 > grid.half_span()) {
    throw PreconditionError("bspline support [0, " + std::to_string(degree + 1) +
                            "] does not fit in the time span of the grid");
  }
  const std::int64_t xi_half = grid.half_range();
  const double dx = grid.time_spacing();
  // Fine lattice at half the time spacing: unit interval = 4 Xi fine steps,
  // box of 2 Xi midpoint taps at odd offsets.
  const std::int64_t unit = 4 * xi_half;
  std::vector<double> cur(static_cast<std::size_t>(unit + 1), 1.0);
  cur.front() = 0.5;
  cur.back() = 0.5;
  for (int k = 1; k <= degree; ++k) {
    const std::size_t len = static_cast<std::size_t>((k + 1) * unit + 1);
    std::vector<double> prefix(len, 0.0);  // same-parity running sums of cur
    for (std::size_t q = 0; q < len; ++q) {
      const double v = q < cur.size() ? cur[q] : 0.0;
      prefix[q] = v + (q >= 2 ? prefix[q - 2] : 0.0);
    }
    auto upto = [&](std::int64_t q) { return q < 0 ? 0.0 : prefix[static_cast<std::size_t>(q)]; };
    std::vector<double> next(len);
    for (std::size_t p = 0; p < len; ++p) {
      const auto ip = static_cast<std::int64_t>(p);
      next[p] = dx * (upto(ip - 1) - upto(ip - 1 - unit));
    }
    cur = std::move(next);
  }
  std::vector<Complex> time(grid.size());
  for (std::size_t pos = 0; pos < grid.size(); ++pos) {
    const std::int64_t fine = 2 * grid.index_at(pos);
    if (fine >= 0 && fine < static_cast<std::int64_t>(cur.size())) {
      time[pos] = cur[static_cast<std::size_t>(fine)];
    }
  }
  std::vector<Complex> freq(grid.size());
  for (std::size_t pos = 0; pos < grid.size(); ++pos) {
    freq[pos] = bspline_spectrum_value(degree, grid.frequency(pos));
  }
  const std::string label = "bspline" + std::to_string(degree);
  return {SampledSignal(grid, std::move(time), label),
          SampledSpectrum(grid, std::move(freq), label).with_hermitian(true)};
}

SampledSpectrum build_psi_spectrum(const PsiParams& params, const FrequencyGrid& grid) {
  PsiParams::make(params.alpha, params.beta, params.n, params.J);
  const std::int64_t required = params.required_half_range();
  if (grid.half_range() < required) {
    throw GridTooSmallError("psi grid too small: half range Xi=" +
                                std::to_string(grid.half_range()) + " but blocks up to J=" +
                                std::to_string(params.J) + " need Xi >= " +
                                std::to_string(required),
                            required);
  }
  const std::int64_t s = grid.samples_per_unit();
  std::vector<Complex> values(grid.size());

  auto put = [&](std::int64_t index, double v) {
    Complex& slot = values[grid.position(index)];
    if (slot != Complex{}) {
      throw std::logic_error("psi blocks overlap at lattice index " + std::to_string(index));
    }
    slot = v;
  };

  // Nonzero samples of h_j on the local lattice k/S.
  auto local_window = [&](int j) {
    const auto support = bumps::h_support(j, params.alpha);
    const auto lo = static_cast<std::int64_t>(std::floor(support.lo * s));
    const auto hi = static_cast<std::int64_t>(std::ceil(support.hi * s));
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double v = bumps::h(static_cast<double>(k) / s, j, params.alpha);
      if (v != 0.0) out.emplace_back(k, v);
    }
    return out;
  };

  std::vector<BlockSpan> blocks;
  const auto core = local_window(0);
  for (const auto& [k, v] : core) put(k, v);
  blocks.push_back({0, core.front().first, core.back().first});

  for (int j = 1; j <= params.J; ++j) {
    const std::int64_t count = params.block_count(j);
    const std::int64_t offset = params.block_offset(j);
    const double scale = 1.0 / std::sqrt(static_cast<double>(count));
    const auto window = local_window(j);
    if (window.empty()) throw std::logic_error("empty psi block window");
    for (std::int64_t l = 0; l < count; ++l) {
      const std::int64_t center = params.n * (offset + l) * s;
      for (const auto& [k, v] : window) {
        put(center + k, scale * v);
        put(-(center + k), scale * v);
      }
    }
    blocks.push_back({j, params.n * offset * s + window.front().first,
                      params.n * (offset + count - 1) * s + window.back().first});
  }

  std::string label = label_of(params);
  return SampledSpectrum(grid, std::move(values), std::move(label))
      .with_hermitian(true)
      .with_exclusion(params.exclusion_half_width())
      .with_blocks(std::move(blocks));
}

GridPlan plan_psi_grid(const PsiParams& params) {
  PsiParams::make(params.alpha, params.beta, params.n, params.J);
  const int xi = next_pow2(params.n * params.block_offset(params.J + 1) + 2);
  const double width = bumps::h_support(params.J, params.alpha).width();
  const int s = next_pow2(static_cast<std::int64_t>(std::ceil(32.0 / width)));
  const std::uint64_t points = 2ull * static_cast<std::uint64_t>(xi) * static_cast<std::uint64_t>(s);
  if (points > kMaxAutoGridPoints) {
    throw PreconditionError("automatic grid for " + label_of(params) + " needs S=" +
                            std::to_string(s) + ", Xi=" + std::to_string(xi) + " (" +
                            std::to_string(points) +
                            " points); pass an explicit --grid S,Xi or lower J");
  }
  return {s, xi,
          "Xi >= n*gamma_{J+1} + 2 = " +
              std::to_string(params.n * params.block_offset(params.J + 1) + 2) +
              "; S >= 32 samples across the narrowest block (width " + fmt_number(width) + ")"};
}

GridPlan plan_grid(const GeneratorSpec& spec) {
  struct {
    GridPlan operator()(const Sinc&) const {
      return {2048, 16, "time span +-1024 for windows up to 128; indicator edges on grid"};
    }
    GridPlan operator()(const BSpline&) const {
      return {256, 512, "closed-form spectrum tail beyond Xi=512 below 1e-10 in periodization"};
    }
    GridPlan operator()(const PsiParams& p) const { return plan_psi_grid(p); }
    GridPlan operator()(const Custom& c) const {
      if (!c.spectrum) throw PreconditionError("custom generator has no spectrum");
      return {c.spectrum->grid().samples_per_unit(), c.spectrum->grid().half_range(),
              "grid of the supplied spectrum"};
    }
  } visitor;
  return std::visit(visitor, spec);
}

FrequencyGrid auto_grid(const GeneratorSpec& spec) {
  const auto plan = plan_grid(spec);
  return FrequencyGrid(plan.samples_per_unit, plan.half_range);
}

SampledSpectrum build_spectrum(const GeneratorSpec& spec, const FrequencyGrid& grid) {
  validate(spec);
  if (std::holds_alternative<Sinc>(spec)) return build_sinc(grid);
  if (const auto* b = std::get_if<BSpline>(&spec)) return build_bspline(b->degree, grid).spectrum;
  if (const auto* p = std::get_if<PsiParams>(&spec)) return build_psi_spectrum(*p, grid);
  const auto& custom = std::get<Custom>(spec);
  if (!(custom.spectrum->grid() == grid)) {
    throw PreconditionError("custom spectrum is sampled on S=" +
                            std::to_string(custom.spectrum->grid().samples_per_unit()) +
                            ", Xi=" + std::to_string(custom.spectrum->grid().half_range()) +
                            "; it cannot be resampled to another grid");
  }
  return *custom.spectrum;
}

void check_margin(const SampledSpectrum& f) {
  const auto& grid = f.grid();
  const std::int64_t inner = static_cast<std::int64_t>(grid.half_range() - 1) * grid.samples_per_unit();
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t pos = 0; pos < grid.size(); ++pos) {
    const double e = std::norm(f.values()[pos]);
    total += e;
    const std::int64_t i = grid.index_at(pos);
    if (i < -inner || i >= inner) outer += e;
  }
  if (outer > 1e-6 * total) {
    throw PreconditionError("spectrum '" + f.label() +
                            "' carries more than 1e-6 of its energy within one unit of the grid edge");
  }
}

double dirichlet_ratio(double theta, std::int64_t count) {
  const double whole = std::round(theta);
  const double r = theta - whole;
  const auto c = static_cast<double>(count);
  double value;
  if (std::abs(r) < 1e-8) {
    value = c * (1.0 - (c * c - 1.0) * kPi * kPi * r * r / 6.0);
  } else {
    value = std::sin(kPi * c * r) / std::sin(kPi * r);
  }
  // shifting theta by an integer m multiplies the ratio by (-1)^{m (count - 1)}
  const bool odd_shift = std::fmod(std::abs(whole), 2.0) == 1.0 && (count - 1) % 2 != 0;
  return odd_shift ? -value : value;
}

Complex geometric_phase_sum(double theta, std::int64_t count) {
  const double r = theta - std::round(theta);
  const double ratio = dirichlet_ratio(r, count);
  return std::polar(ratio, kPi * r * static_cast<double>(count - 1));
}

}  // namespace sispace::generators
