#include "sispace/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sispace/errors.hpp"

namespace sispace::cli {
namespace fs = std::filesystem;
using Doc = nlohmann::json;
using generators::GeneratorSpec;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

template <class T>
T field(const Doc& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) throw ConfigError(context + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const Doc::exception&) {
    throw ConfigError(context + ": field '" + std::string(key) + "' has the wrong type");
  }
}

Doc parse_json(const std::string& text, const std::string& context) {
  try {
    return Doc::parse(text);
  } catch (const Doc::parse_error& e) {
    throw ConfigError(context + ": invalid JSON (" + e.what() + ")");
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GeneratorSpec spec_from_json(const Doc& g, const fs::path& base_dir, int default_J) {
  if (!g.is_object()) throw ConfigError("generator must be a JSON object");
  const auto variant = field<std::string>(g, "variant", "generator");
  if (variant == "sinc") return generators::Sinc{};
  if (variant == "bspline") {
    const int degree = field<int>(g, "degree", "bspline generator");
    if (degree < 0 || degree > generators::kMaxBSplineDegree) {
      throw ConfigError("bspline degree " + std::to_string(degree) + " exceeds the cap of " +
                        std::to_string(generators::kMaxBSplineDegree));
    }
    return generators::BSpline{degree};
  }
  if (variant == "psi") {
    const int J = g.contains("J") ? field<int>(g, "J", "psi generator") : default_J;
    try {
      return generators::PsiParams::make(field<double>(g, "alpha", "psi generator"),
                                         field<double>(g, "beta", "psi generator"),
                                         field<int>(g, "n", "psi generator"), J);
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  if (variant == "custom") {
    fs::path path = field<std::string>(g, "path", "custom generator");
    if (path.is_relative()) path = base_dir / path;
    std::optional<fs::path> meta;
    if (g.contains("meta")) {
      fs::path m = field<std::string>(g, "meta", "custom generator");
      meta = m.is_relative() ? base_dir / m : m;
    }
    return load_custom(path, meta);
  }
  throw ConfigError("unknown generator variant '" + variant + "'");
}

}  // namespace

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::Periodization: return "periodization";
    case Analysis::Invariance: return "invariance";
    case Analysis::Decay: return "decay";
    case Analysis::Pointwise: return "pointwise";
    case Analysis::Gates: return "gates";
    case Analysis::Suite: return "suite";
  }
  return "unknown";
}

Analysis parse_analysis(const std::string& name) {
  for (auto a : {Analysis::Periodization, Analysis::Invariance, Analysis::Decay,
                 Analysis::Pointwise, Analysis::Gates, Analysis::Suite}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown analysis '" + name + "'");
}

std::vector<Analysis> parse_analyses(const std::string& text) {
  std::vector<Analysis> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto a = parse_analysis(item);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  if (out.empty()) throw ConfigError("analyses must not be empty");
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<GridChoice> parse_grid_option(const std::string& text) {
  if (text == "auto") return std::nullopt;
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("grid must be 'auto' or 'S,Xi'");
  return GridChoice{parse_int(parts[0], "grid S"), parse_int(parts[1], "grid Xi")};
}

std::vector<double> parse_windows(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_double(item, "window"));
  if (out.size() < 4) throw ConfigError("at least four windows are required");
  return out;
}

void apply_formats(RunConfig& config, const std::string& text) {
  config.write_json = false;
  config.write_csv = false;
  for (const auto& item : split(text, ',')) {
    if (item == "json") {
      config.write_json = true;
    } else if (item == "csv") {
      config.write_csv = true;
    } else {
      throw ConfigError("unknown format '" + item + "' (expected json, csv)");
    }
  }
}

GeneratorSpec parse_generator_spec(const std::string& json_text, const fs::path& base_dir,
                                   int default_J) {
  return spec_from_json(parse_json(json_text, "generator"), base_dir, default_J);
}

GeneratorSpec parse_generator_option(const std::string& text, const fs::path& base_dir,
                                     int default_J) {
  if (!text.empty() && text.front() == '{') return parse_generator_spec(text, base_dir, default_J);
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "sinc") return generators::Sinc{};
  if (head == "bspline") {
    Doc g{{"variant", "bspline"}, {"degree", tail.empty() ? 1 : parse_int(tail, "bspline degree")}};
    return spec_from_json(g, base_dir, default_J);
  }
  if (head == "psi") {
    const auto parts = split(tail, ',');
    if (parts.size() < 3 || parts.size() > 4) throw ConfigError("psi shorthand is psi:alpha,beta,n[,J]");
    Doc g{{"variant", "psi"},
           {"alpha", parse_double(parts[0], "alpha")},
           {"beta", parse_double(parts[1], "beta")},
           {"n", parse_int(parts[2], "n")}};
    if (parts.size() == 4) g["J"] = parse_int(parts[3], "J");
    return spec_from_json(g, base_dir, default_J);
  }
  if (head == "custom") {
    return spec_from_json(Doc{{"variant", "custom"}, {"path", tail}}, base_dir, default_J);
  }
  throw ConfigError("unknown generator '" + text + "'");
}

RunConfig parse_run_config(const std::string& text, const fs::path& base_dir) {
  const Doc doc = parse_json(text, "config");
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("parameters")) {
      const auto& p = doc.at("parameters");
      if (!p.is_object()) throw ConfigError("parameters must be an object");
      cfg.params.epsilon = p.value("epsilon", p.value("eps", cfg.params.epsilon));
      cfg.params.gamma = p.value("gamma", cfg.params.gamma);
      cfg.params.delta = p.value("delta", cfg.params.delta);
      cfg.params.p = p.value("p", cfg.params.p);
      cfg.params.q = p.value("q", cfg.params.q);
      cfg.params.n_max = p.value("n_max", cfg.params.n_max);
      cfg.params.J = p.value("J", cfg.params.J);
      if (p.contains("windows")) cfg.params.windows = p.at("windows").get<std::vector<double>>();
    }
    if (!doc.contains("generator")) throw ConfigError("config: missing 'generator'");
    cfg.generator = spec_from_json(doc.at("generator"), base_dir, cfg.params.J);
    if (const auto* psi = generators::psi_params_of(cfg.generator)) cfg.params.J = psi->J;
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      if (g.is_string()) {
        cfg.grid = parse_grid_option(g.get<std::string>());
      } else if (g.is_array() && g.size() == 2) {
        cfg.grid = GridChoice{g[0].get<int>(), g[1].get<int>()};
      } else if (g.is_object()) {
        cfg.grid = GridChoice{field<int>(g, "S", "grid"), field<int>(g, "Xi", "grid")};
      } else {
        throw ConfigError("grid must be \"auto\", [S, Xi] or {\"S\":..,\"Xi\":..}");
      }
    }
    if (doc.contains("analyses")) {
      std::string joined;
      for (const auto& a : doc.at("analyses")) joined += a.get<std::string>() + ",";
      cfg.analyses = parse_analyses(joined);
    }
    if (doc.contains("output")) {
      fs::path out = doc.at("output").get<std::string>();
      cfg.output = out.is_relative() ? base_dir / out : out;
    }
    if (doc.contains("formats")) {
      std::string joined;
      for (const auto& f : doc.at("formats")) joined += f.get<std::string>() + ",";
      joined.pop_back();
      apply_formats(cfg, joined);
    }
  } catch (const Doc::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (cfg.params.windows.size() < 4) throw ConfigError("at least four windows are required");
  if (cfg.params.n_max < 2) throw ConfigError("n_max must be >= 2");
  return cfg;
}

RunConfig load_run_config(const fs::path& file) {
  return parse_run_config(read_file(file), file.parent_path());
}

FrequencyGrid resolve_grid(const RunConfig& config, std::string* reason) {
  if (config.grid) {
    if (reason) *reason = "explicit";
    return FrequencyGrid(config.grid->samples_per_unit, config.grid->half_range);
  }
  const auto plan = generators::plan_grid(config.generator);
  if (reason) *reason = plan.reason;
  return FrequencyGrid(plan.samples_per_unit, plan.half_range);
}

json::Value generator_json(const GeneratorSpec& spec) {
  auto g = json::Value::object();
  if (std::holds_alternative<generators::Sinc>(spec)) {
    g.set("variant", "sinc");
  } else if (const auto* b = std::get_if<generators::BSpline>(&spec)) {
    g.set("variant", "bspline");
    g.set("degree", b->degree);
  } else if (const auto* p = std::get_if<generators::PsiParams>(&spec)) {
    g.set("variant", "psi");
    g.set("alpha", p->alpha);
    g.set("beta", p->beta);
    g.set("n", p->n);
    g.set("J", p->J);
  } else {
    const auto& c = std::get<generators::Custom>(spec);
    g.set("variant", "custom");
    g.set("path", c.source);
    if (c.psi) g.set("restored", generator_json(*c.psi));
  }
  g.set("label", generators::label_of(spec));
  return g;
}

json::Value parameters_json(const Parameters& p) {
  auto o = json::Value::object();
  o.set("epsilon", p.epsilon);
  o.set("gamma", p.gamma);
  o.set("delta", p.delta);
  o.set("p", p.p);
  o.set("q", p.q);
  o.set("n_max", p.n_max);
  o.set("J", p.J);
  o.set("windows", json::Value::array_of(p.windows));
  return o;
}

json::Value meta_json(const GeneratorSpec& spec, const SampledSpectrum& f,
                      const std::string& grid_reason) {
  auto m = json::Value::object();
  m.set("label", f.label());
  m.set("generator", generator_json(spec));
  auto grid = json::Value::object();
  grid.set("S", f.grid().samples_per_unit());
  grid.set("Xi", f.grid().half_range());
  grid.set("points", f.grid().size());
  grid.set("reason", grid_reason);
  m.set("grid", std::move(grid));
  m.set("hermitian", f.hermitian());
  if (const auto w = f.exclusion_half_width()) {
    m.set("exclusion_half_width", *w);
  } else {
    m.set("exclusion_half_width", nullptr);
  }
  if (const auto* p = generators::psi_params_of(spec)) {
    m.set("beta_j", json::Value::array_of(p->block_counts(p->J - 1)));
    m.set("gamma_j", json::Value::array_of(p->block_offsets(p->J - 1)));
  }
  auto blocks = json::Value::array();
  for (const auto& b : f.blocks()) {
    auto o = json::Value::object();
    o.set("block", b.block);
    o.set("first", b.first);
    o.set("last", b.last);
    if (const auto* p = generators::psi_params_of(spec)) {
      o.set("beta_j", p->block_count(b.block));
      o.set("gamma_j", p->block_offset(b.block));
    }
    blocks.push(std::move(o));
  }
  m.set("blocks", std::move(blocks));
  return m;
}

json::Value periodization_json(const analysis::PeriodizationProfile& profile, int gram_K) {
  const auto bounds = analysis::riesz_bounds(profile);
  auto o = json::Value::object();
  o.set("m", bounds.m);
  o.set("M", bounds.M);
  o.set("riesz_generator", bounds.is_riesz);
  o.set("riesz_threshold", bounds.threshold);
  o.set("orthonormality_defect", analysis::orthonormality_defect(profile));
  if (const auto band = profile.excluded_band()) {
    o.set("excluded_band", json::Value::array_of(std::vector<double>{band->first, band->second}));
  } else {
    o.set("excluded_band", nullptr);
  }
  o.set("excluded_points", profile.excluded_count());
  if (gram_K > 0) {
    const auto a = analysis::gram_coefficients(profile, gram_K);
    auto gram = json::Value::array();
    for (int k = -gram_K; k <= gram_K; ++k) {
      const auto& v = a[static_cast<std::size_t>(k + gram_K)];
      auto e = json::Value::object();
      e.set("k", k);
      e.set("re", v.real());
      e.set("im", v.imag());
      gram.push(std::move(e));
    }
    o.set("gram", std::move(gram));
  }
  return o;
}

json::Value invariance_json(const analysis::InvarianceGroup& group) {
  auto o = json::Value::object();
  o.set("invariance_group", group.describe());
  auto t = json::Value::object();
  t.set("defect", group.translation.defect);
  t.set("passes", group.translation.passes);
  t.set("threshold", analysis::kActiveThreshold);
  if (group.translation.witness) {
    t.set("witness", *group.translation.witness);
  } else {
    t.set("witness", nullptr);
  }
  o.set("translation", std::move(t));
  auto verdicts = json::Value::object();
  auto fractions = json::Value::object();
  for (const auto& r : group.reports) {
    verdicts.set(std::to_string(r.n), r.pass ? "pass" : "fail");
    fractions.set(std::to_string(r.n), r.violation_fraction);
  }
  o.set("invariance", std::move(verdicts));
  o.set("violation_fraction", std::move(fractions));
  o.set("passing_n", json::Value::array_of(group.passing_n));
  o.set("active_threshold", analysis::kActiveThreshold);
  return o;
}

json::Value growth_json(const localization::GrowthVerdict& g) {
  auto o = json::Value::object();
  o.set("p", g.p);
  o.set("w", g.w);
  o.set("windows", json::Value::array_of(g.windows));
  o.set("partials", json::Value::array_of(g.partials));
  o.set("tail_increments", json::Value::array_of(g.tail_increments));
  o.set("doubling_increments", json::Value::array_of(g.doubling_increments));
  o.set("fitted_slope", g.fitted_slope);
  o.set("rel_tol", g.rel_tol);
  o.set("verdict", localization::to_string(g.verdict));
  return o;
}

json::Value freq_decay_json(const localization::FreqDecay& d) {
  auto o = json::Value::object();
  o.set("s", d.s);
  o.set("sup_value", d.sup_value);
  o.set("argmax", d.argmax);
  if (d.core_peak) {
    o.set("core_peak", *d.core_peak);
  } else {
    o.set("core_peak", nullptr);
  }
  o.set("block_peaks", json::Value::array_of(d.block_peaks));
  return o;
}

json::Value freq_norm_json(const localization::FreqNorm& n, double q, double delta) {
  auto o = json::Value::object();
  o.set("q", q);
  o.set("delta", delta);
  o.set("total", n.total);
  o.set("core", n.core);
  o.set("block_contributions", json::Value::array_of(n.block_contributions));
  return o;
}

json::Value gates_json(const localization::FeasibilityGate& gate,
                       const localization::GateResult& r) {
  auto in = json::Value::object();
  in.set("alpha", gate.alpha);
  in.set("beta", gate.beta);
  in.set("gamma", gate.gamma);
  in.set("delta", gate.delta);
  in.set("p", gate.p);
  in.set("q", gate.q);
  auto o = json::Value::object();
  o.set("inputs", std::move(in));
  o.set("time_integrability_ok", r.time_integrability_ok);
  o.set("time_integrability_margin", r.time_integrability_margin);
  o.set("freq_integrability_ok", r.freq_integrability_ok);
  o.set("freq_integrability_margin", r.freq_integrability_margin);
  o.set("exponent_compatible", r.exponent_compatible);
  o.set("exponent_value", r.exponent_value);
  o.set("exponent_bound", r.exponent_bound);
  return o;
}

json::Value suite_json(const localization::SuiteReport& r) {
  auto o = json::Value::object();
  o.set("label", r.label);
  o.set("S", r.samples_per_unit);
  o.set("Xi", r.half_range);
  o.set("epsilon", r.epsilon);
  o.set("m", r.bounds.m);
  o.set("M", r.bounds.M);
  o.set("orthonormality_defect", r.orthonormality_defect);
  if (r.excluded_band) {
    o.set("excluded_band",
          json::Value::array_of(std::vector<double>{r.excluded_band->first, r.excluded_band->second}));
  } else {
    o.set("excluded_band", nullptr);
  }
  o.set("invariance_group", r.invariance_group);
  o.set("invariance_passing_n", json::Value::array_of(r.invariance_passing_n));
  o.set("spectral_decay_exponent", r.spectral_decay);
  auto gate = json::Value::object();
  gate.set("time_integrability_ok", r.gates.time_integrability_ok);
  gate.set("freq_integrability_ok", r.gates.freq_integrability_ok);
  gate.set("exponent_compatible", r.gates.exponent_compatible);
  o.set("gates", std::move(gate));
  auto checks = json::Value::array();
  for (const auto& c : r.checks) {
    auto e = json::Value::object();
    e.set("tag", c.tag);
    e.set("statement", c.statement);
    e.set("outcome", c.outcome);
    e.set("consistent", c.consistent);
    e.set("values", json::Value::array_of(c.values));
    if (c.growth) e.set("growth", growth_json(*c.growth));
    checks.push(std::move(e));
  }
  o.set("checks", std::move(checks));
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

void append_row(std::string& out, std::int64_t index, double coord, Complex v) {
  out += std::to_string(index);
  for (double d : {coord, v.real(), v.imag()}) {
    out += ',';
    out += json::format_double(d);
  }
  out += '\n';
}

}  // namespace

void write_spectrum_csv(const fs::path& path, const SampledSpectrum& f) {
  std::string out = "index,xi,re,im\n";
  for (std::size_t pos = 0; pos < f.grid().size(); ++pos) {
    const Complex v = f.values()[pos];
    if (v != Complex{}) append_row(out, f.grid().index_at(pos), f.grid().frequency(pos), v);
  }
  write_text(path, out);
}

void write_signal_csv(const fs::path& path, const SampledSignal& s, double reach) {
  std::string out = "index,x,re,im\n";
  for (std::size_t pos = 0; pos < s.grid().size(); ++pos) {
    if (std::abs(s.time(pos)) <= reach) append_row(out, s.grid().index_at(pos), s.time(pos), s.values()[pos]);
  }
  write_text(path, out);
}

generators::Custom load_custom(const fs::path& csv, const std::optional<fs::path>& meta_path) {
  const fs::path meta_file = meta_path ? *meta_path : csv.parent_path() / "meta.json";
  const Doc meta = parse_json(read_file(meta_file), meta_file.string());
  int s = 0;
  int xi = 0;
  try {
    s = meta.at("grid").at("S").get<int>();
    xi = meta.at("grid").at("Xi").get<int>();
  } catch (const Doc::exception&) {
    throw ConfigError(meta_file.string() + ": grid.S and grid.Xi are required");
  }
  FrequencyGrid grid = [&] {
    try {
      return FrequencyGrid(s, xi);
    } catch (const PreconditionError& e) {
      throw ConfigError(meta_file.string() + ": " + e.what());
    }
  }();

  std::vector<Complex> values(grid.size());
  const std::string text = read_file(csv);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 4) throw ConfigError(csv.string() + ": row " + std::to_string(row) + " needs 4 columns");
    std::int64_t index = 0;
    const auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), index);
    if (r.ec != std::errc{}) throw ConfigError(csv.string() + ": bad index on row " + std::to_string(row));
    if (!grid.contains(index)) throw ConfigError(csv.string() + ": index outside the grid on row " + std::to_string(row));
    values[grid.position(index)] = {parse_double(cells[2], "re"), parse_double(cells[3], "im")};
  }

  const std::string label = meta.value("label", std::string("custom"));
  const bool hermitian = meta.value("hermitian", false);
  std::optional<double> exclusion;
  if (meta.contains("exclusion_half_width") && meta.at("exclusion_half_width").is_number()) {
    exclusion = meta.at("exclusion_half_width").get<double>();
  }
  std::vector<BlockSpan> blocks;
  if (meta.contains("blocks")) {
    for (const auto& b : meta.at("blocks")) {
      blocks.push_back({b.at("block").get<int>(), b.at("first").get<std::int64_t>(),
                        b.at("last").get<std::int64_t>()});
    }
  }
  SampledSpectrum raw(grid, std::move(values), label);
  auto f = exclusion ? SampledSpectrum(std::move(raw).with_hermitian(hermitian)
                                           .with_exclusion(*exclusion)
                                           .with_blocks(std::move(blocks)))
                     : SampledSpectrum(std::move(raw).with_hermitian(hermitian)
                                           .with_blocks(std::move(blocks)));

  generators::Custom custom;
  custom.source = csv.string();
  if (meta.contains("generator") && meta.at("generator").value("variant", "") == "psi") {
    const auto& g = meta.at("generator");
    custom.psi = generators::PsiParams::make(g.at("alpha").get<double>(), g.at("beta").get<double>(),
                                             g.at("n").get<int>(), g.at("J").get<int>());
  }
  generators::check_margin(f);
  custom.spectrum = std::make_shared<const SampledSpectrum>(std::move(f));
  return custom;
}

}  // namespace sispace::cli
