#include "sispace/commands.hpp"

#include <algorithm>
#include <chrono>
#include <functional>

#include "sispace/errors.hpp"

namespace sispace::cli {
namespace fs = std::filesystem;
using localization::FeasibilityGate;

namespace {

// Re-throws e with the analysis name prefixed, keeping its category.
[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const GridTooSmallError& e) {
    throw GridTooSmallError(context + ": " + e.what(), e.required_half_range());
  } catch (const PreconditionError& e) {
    throw PreconditionError(context + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  }
}

FeasibilityGate gate_for(const generators::GeneratorSpec& spec, const Parameters& p) {
  FeasibilityGate g;
  if (const auto* psi = generators::psi_params_of(spec)) {
    g.alpha = psi->alpha;
    g.beta = psi->beta;
  }
  g.gamma = p.gamma;
  g.delta = p.delta;
  g.p = p.p;
  g.q = p.q;
  g.epsilon = p.epsilon;
  return g;
}

double max_window(const Parameters& p) {
  return *std::max_element(p.windows.begin(), p.windows.end());
}

std::string growth_csv(const localization::GrowthVerdict& g) {
  std::string out = "T,partial,increment\n";
  for (std::size_t i = 0; i < g.windows.size(); ++i) {
    out += json::format_double(g.windows[i]) + "," + json::format_double(g.partials[i]) + "," +
           (i ? json::format_double(g.tail_increments[i - 1]) : std::string("")) + "\n";
  }
  return out;
}

struct AnalysisOutput {
  json::Value section;
  std::vector<std::pair<std::string, std::string>> tables;  // file name, CSV text
};

AnalysisOutput run_periodization(const SampledSpectrum& f) {
  const auto profile = analysis::periodization(f);
  const int K = std::min(8, profile.samples_per_unit / 2 - 1);
  AnalysisOutput out{periodization_json(profile, K), {}};
  std::string csv = "r,xi,G,excluded\n";
  for (std::size_t r = 0; r < profile.values.size(); ++r) {
    csv += std::to_string(r) + "," + json::format_double(profile.frequency(r)) + "," +
           json::format_double(profile.values[r]) + "," + (profile.excluded[r] ? "1" : "0") + "\n";
  }
  out.tables.emplace_back("periodization.csv", std::move(csv));
  return out;
}

AnalysisOutput run_invariance(const SampledSpectrum& f, const Parameters& p) {
  const int n_max = std::min(p.n_max, f.grid().half_range() / 2);
  return {invariance_json(analysis::detect_invariance_group(f, n_max)), {}};
}

AnalysisOutput run_decay(const generators::GeneratorSpec& spec, const SampledSpectrum& f,
                         const Parameters& p) {
  const auto profile = localization::time_profile_for(spec, f, max_window(p));
  AnalysisOutput out{json::Value::object(), {}};
  out.section.set("route", generators::psi_params_of(spec) ? "analytic" : "grid");
  out.section.set("sample_spacing", profile.spacing());
  struct Probe {
    const char* name;
    double p;
    double w;
    bool open_case;
  };
  const bool open = p.epsilon == 0.0;
  const Probe probes[] = {{"l1", 1.0, 0.0, false},
                          {"moment_above", 2.0, 1.0 + p.epsilon, open},
                          {"moment_below", 2.0, 1.0 - p.epsilon, open}};
  for (const auto& probe : probes) {
    const auto g = localization::divergence_probe(profile, probe.p, probe.w, p.windows);
    auto section = growth_json(g);
    if (probe.open_case) section.set("verdict", "inconclusive-open-case");
    out.section.set(probe.name, std::move(section));
    out.tables.emplace_back(std::string("decay_") + probe.name + ".csv", growth_csv(g));
  }
  return out;
}

AnalysisOutput run_pointwise(const SampledSpectrum& f, const Parameters& p) {
  const auto half = localization::pointwise_freq_decay(f, 0.5);
  const auto above = localization::pointwise_freq_decay(f, 0.5 + p.epsilon);
  const auto norm = localization::weighted_freq_norm(f, p.q, p.delta, f.grid().half_range());
  AnalysisOutput out{json::Value::object(), {}};
  out.section.set("bounded_exponent", freq_decay_json(half));
  out.section.set("growth_exponent", freq_decay_json(above));
  out.section.set("frequency_norm", freq_norm_json(norm, p.q, p.delta));
  out.section.set("spectral_decay_exponent", localization::spectral_decay_exponent(f));
  if (!half.block_peaks.empty()) {
    std::string csv = "block,peak_half,peak_above,norm_contribution\n";
    for (std::size_t j = 0; j < half.block_peaks.size(); ++j) {
      csv += std::to_string(j + 1) + "," + json::format_double(half.block_peaks[j]) + "," +
             json::format_double(above.block_peaks[j]) + "," +
             json::format_double(norm.block_contributions[j]) + "\n";
    }
    out.tables.emplace_back("freq_blocks.csv", std::move(csv));
  }
  return out;
}

AnalysisOutput run_gates(const generators::GeneratorSpec& spec, const Parameters& p) {
  const auto gate = gate_for(spec, p);
  auto section = gates_json(gate, localization::feasibility_gates(gate));
  if (!generators::psi_params_of(spec)) {
    section.set("note", "alpha and beta are the defaults of the psi construction; the generator is not a psi spectrum");
  }
  return {std::move(section), {}};
}

AnalysisOutput run_suite(const generators::GeneratorSpec& spec, const FrequencyGrid& grid,
                         const Parameters& p) {
  localization::SuiteOptions options;
  options.grid = grid;
  options.windows = p.windows;
  options.n_max = p.n_max;
  return {suite_json(localization::theorem_witness_suite(spec, p.epsilon, gate_for(spec, p), options)),
          {}};
}

}  // namespace

std::string version() { return SISPACE_VERSION; }

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const PreconditionError*>(&e)) return 3;
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  return 1;
}

CommandResult cmd_construct(const RunConfig& config) {
  std::string reason;
  const FrequencyGrid grid = resolve_grid(config, &reason);
  CommandResult result;
  SampledSpectrum f = [&] {
    try {
      return generators::build_spectrum(config.generator, grid);
    } catch (...) {
      rethrow_with_context("construct");
    }
  }();
  const auto meta = meta_json(config.generator, f, reason).dump();
  if (config.write_csv) {
    const auto* b = std::get_if<generators::BSpline>(&config.generator);
    const SampledSignal signal =
        b ? generators::build_bspline(b->degree, grid).signal : to_time_domain(f);
    write_spectrum_csv(config.output / "spectrum.csv", f);
    write_signal_csv(config.output / "signal.csv", signal, max_window(config.params));
    result.files.push_back(config.output / "spectrum.csv");
    result.files.push_back(config.output / "signal.csv");
  }
  write_text(config.output / "meta.json", meta);
  result.files.push_back(config.output / "meta.json");
  result.text = meta;
  return result;
}

CommandResult cmd_analyze(const RunConfig& config) {
  if (config.analyses.empty()) throw ConfigError("analyses must not be empty");
  std::string reason;
  const FrequencyGrid grid = resolve_grid(config, &reason);
  const SampledSpectrum f = [&] {
    try {
      return generators::build_spectrum(config.generator, grid);
    } catch (...) {
      rethrow_with_context("analyze");
    }
  }();

  auto report = json::Value::object();
  report.set("tool", "sispace");
  report.set("version", version());
  report.set("command", "analyze");
  report.set("generator", generator_json(config.generator));
  auto grid_json = json::Value::object();
  grid_json.set("S", grid.samples_per_unit());
  grid_json.set("Xi", grid.half_range());
  grid_json.set("mode", config.grid ? "explicit" : "auto");
  grid_json.set("reason", reason);
  if (const auto w = f.exclusion_half_width()) {
    grid_json.set("exclusion_half_width", *w);
  } else {
    grid_json.set("exclusion_half_width", nullptr);
  }
  report.set("grid", std::move(grid_json));
  report.set("parameters", parameters_json(config.params));
  auto names = json::Value::array();
  for (auto a : config.analyses) names.push(to_string(a));
  report.set("analyses", std::move(names));

  auto results = json::Value::object();
  auto timings = json::Value::object();
  std::vector<std::pair<std::string, std::string>> tables;
  for (const auto a : config.analyses) {
    const std::string name = to_string(a);
    const auto start = std::chrono::steady_clock::now();
    AnalysisOutput out;
    try {
      switch (a) {
        case Analysis::Periodization: out = run_periodization(f); break;
        case Analysis::Invariance: out = run_invariance(f, config.params); break;
        case Analysis::Decay: out = run_decay(config.generator, f, config.params); break;
        case Analysis::Pointwise: out = run_pointwise(f, config.params); break;
        case Analysis::Gates: out = run_gates(config.generator, config.params); break;
        case Analysis::Suite: out = run_suite(config.generator, grid, config.params); break;
      }
    } catch (...) {
      rethrow_with_context(name);
    }
    timings.set(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    results.set(name, std::move(out.section));
    for (auto& t : out.tables) tables.push_back(std::move(t));
  }
  report.set("results", std::move(results));

  CommandResult result;
  result.text = report.dump();
  if (config.write_json) {
    write_text(config.output / "report.json", result.text);
    write_text(config.output / "timings.json", timings.dump());
    result.files.push_back(config.output / "report.json");
    result.files.push_back(config.output / "timings.json");
  }
  if (config.write_csv) {
    for (const auto& [file, text] : tables) {
      write_text(config.output / file, text);
      result.files.push_back(config.output / file);
    }
  }
  return result;
}

CommandResult cmd_compare(const std::vector<RunConfig>& configs, const fs::path& out_dir) {
  if (configs.size() < 2) throw ConfigError("compare needs at least two configs");
  int n_cols = 2;
  for (const auto& c : configs) n_cols = std::max(n_cols, c.params.n_max);

  std::string csv = "generator,S,Xi,m,M,orthonormality_defect,invariance_group";
  for (int n = 2; n <= n_cols; ++n) csv += ",n" + std::to_string(n);
  csv += ",l1_verdict,sup_weighted_half,time_integrability_ok,freq_integrability_ok,exponent_compatible\n";

  for (const auto& config : configs) {
    const std::string label = generators::label_of(config.generator);
    try {
      const FrequencyGrid grid = resolve_grid(config);
      const SampledSpectrum f = generators::build_spectrum(config.generator, grid);
      const auto profile = analysis::periodization(f);
      const auto group =
          analysis::detect_invariance_group(f, std::min(config.params.n_max, grid.half_range() / 2));
      const auto time = localization::time_profile_for(config.generator, f, max_window(config.params));
      const auto l1 = localization::divergence_probe(time, 1.0, 0.0, config.params.windows);
      const auto sup = localization::pointwise_freq_decay(f, 0.5).sup_value;

      csv += label + "," + std::to_string(grid.samples_per_unit()) + "," +
             std::to_string(grid.half_range()) + "," + json::format_double(profile.m) + "," +
             json::format_double(profile.M) + "," +
             json::format_double(analysis::orthonormality_defect(profile)) + "," +
             group.describe();
      for (int n = 2; n <= n_cols; ++n) {
        const auto it = std::find_if(group.reports.begin(), group.reports.end(),
                                     [n](const auto& r) { return r.n == n; });
        csv += it == group.reports.end() ? ",n/a" : (it->pass ? ",pass" : ",fail");
      }
      csv += "," + localization::to_string(l1.verdict) + "," + json::format_double(sup);
      if (generators::psi_params_of(config.generator)) {
        const auto gates = localization::feasibility_gates(gate_for(config.generator, config.params));
        for (bool ok : {gates.time_integrability_ok, gates.freq_integrability_ok, gates.exponent_compatible}) {
          csv += ok ? ",true" : ",false";
        }
      } else {
        csv += ",n/a,n/a,n/a";
      }
      csv += "\n";
    } catch (...) {
      rethrow_with_context("compare " + label);
    }
  }
  CommandResult result;
  result.text = csv;
  write_text(out_dir / "compare.csv", csv);
  result.files.push_back(out_dir / "compare.csv");
  return result;
}

}  // namespace sispace::cli
