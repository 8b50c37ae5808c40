#pragma once

// Run configuration, CSV/JSON serialization and the report sections shared by
// the command implementations.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sispace/generators.hpp"
#include "sispace/json_out.hpp"
#include "sispace/localization.hpp"
#include "sispace/spectral.hpp"

namespace sispace::cli {

enum class Analysis { Periodization, Invariance, Decay, Pointwise, Gates, Suite };

std::string to_string(Analysis a);
/// Throws ConfigError for unknown names.
Analysis parse_analysis(const std::string& name);

struct Parameters {
  double epsilon = 0.5;
  double gamma = 0.0;
  double delta = 0.2;
  double p = 1.0;
  double q = 1.0;
  int n_max = 8;
  int J = 5;
  std::vector<double> windows{4, 8, 16, 32, 64};
};

struct GridChoice {
  int samples_per_unit;
  int half_range;
};

struct RunConfig {
  generators::GeneratorSpec generator = generators::Sinc{};
  std::optional<GridChoice> grid;  // nullopt selects the automatic sizing rule
  std::vector<Analysis> analyses{Analysis::Periodization, Analysis::Invariance, Analysis::Decay,
                                 Analysis::Pointwise, Analysis::Gates};
  Parameters params;
  std::filesystem::path output = "sispace_out";
  bool write_json = true;
  bool write_csv = true;
};

/// Parses a JSON config document. Relative paths resolve against base_dir.
/// Throws ConfigError on malformed input.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& file);

/// {"variant": "sinc" | "bspline" | "psi" | "custom", ...}; J defaults to default_J.
generators::GeneratorSpec parse_generator_spec(const std::string& json_text,
                                               const std::filesystem::path& base_dir,
                                               int default_J = 5);
/// Shorthand used on the command line: "sinc", "bspline:3", "psi:1,2,2,5",
/// or an inline JSON object.
generators::GeneratorSpec parse_generator_option(const std::string& text,
                                                 const std::filesystem::path& base_dir,
                                                 int default_J = 5);

std::optional<GridChoice> parse_grid_option(const std::string& text);  // "auto" or "S,Xi"
std::vector<double> parse_windows(const std::string& text);
std::vector<Analysis> parse_analyses(const std::string& text);
/// Sets write_json / write_csv from "json,csv".
void apply_formats(RunConfig& config, const std::string& text);

/// Grid for a config: the explicit choice or the family's sizing rule.
FrequencyGrid resolve_grid(const RunConfig& config, std::string* reason = nullptr);

json::Value generator_json(const generators::GeneratorSpec& spec);
json::Value parameters_json(const Parameters& p);
json::Value meta_json(const generators::GeneratorSpec& spec, const SampledSpectrum& f,
                      const std::string& grid_reason);

json::Value periodization_json(const analysis::PeriodizationProfile& profile, int gram_K);
json::Value invariance_json(const analysis::InvarianceGroup& group);
json::Value growth_json(const localization::GrowthVerdict& g);
json::Value freq_decay_json(const localization::FreqDecay& d);
json::Value freq_norm_json(const localization::FreqNorm& n, double q, double delta);
json::Value gates_json(const localization::FeasibilityGate& gate, const localization::GateResult& r);
json::Value suite_json(const localization::SuiteReport& r);

/// Rows "index,xi,re,im" for the nonzero entries.
void write_spectrum_csv(const std::filesystem::path& path, const SampledSpectrum& f);
/// Rows "index,x,re,im" for |x| <= reach.
void write_signal_csv(const std::filesystem::path& path, const SampledSignal& s, double reach);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Reads a spectrum written by write_spectrum_csv together with its meta.json
/// (given, or "meta.json" next to the CSV). Throws IoError / ConfigError.
generators::Custom load_custom(const std::filesystem::path& csv,
                               const std::optional<std::filesystem::path>& meta = std::nullopt);

}  // namespace sispace::cli
