#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sispace/commands.hpp"
#include "sispace/errors.hpp"

namespace fs = std::filesystem;
using namespace sispace;

namespace {

struct Overrides {
  std::vector<std::string> configs;
  std::optional<std::string> generator;
  std::optional<std::string> out;
  std::optional<std::string> formats;
  std::optional<std::string> grid;
  std::optional<int> n_max;
  std::optional<double> eps;
  std::optional<std::string> windows;
  std::optional<std::string> analyses;
};

void add_common(CLI::App* cmd, Overrides& o, bool many_configs) {
  if (many_configs) {
    cmd->add_option("--config", o.configs, "JSON run config (repeat for each generator)");
  } else {
    cmd->add_option("--config", o.configs, "JSON run config")->expected(0, 1);
  }
  cmd->add_option("--generator", o.generator,
                  "generator shorthand: sinc | bspline:DEG | psi:ALPHA,BETA,N[,J] | JSON object");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.formats, "comma list of json, csv");
  cmd->add_option("--grid", o.grid, "S,Xi or auto");
  cmd->add_option("--n-max", o.n_max, "largest n tested for (1/n)Z invariance");
  cmd->add_option("--eps", o.eps, "epsilon for the moment probes");
  cmd->add_option("--windows", o.windows, "comma list of geometric time windows");
  cmd->add_option("--analyses", o.analyses,
                  "comma list of periodization, invariance, decay, pointwise, gates, suite");
}

cli::RunConfig build_config(const std::optional<std::string>& file, const Overrides& o) {
  cli::RunConfig cfg;
  if (file) {
    cfg = cli::load_run_config(*file);
  } else if (!o.generator) {
    throw ConfigError("either --config or --generator is required");
  }
  if (o.eps) cfg.params.epsilon = *o.eps;
  if (o.n_max) cfg.params.n_max = *o.n_max;
  if (o.windows) cfg.params.windows = cli::parse_windows(*o.windows);
  if (o.generator) {
    cfg.generator = cli::parse_generator_option(*o.generator, fs::current_path(), cfg.params.J);
    if (const auto* p = generators::psi_params_of(cfg.generator)) cfg.params.J = p->J;
  }
  if (o.grid) cfg.grid = cli::parse_grid_option(*o.grid);
  if (o.analyses) cfg.analyses = cli::parse_analyses(*o.analyses);
  if (o.formats) cli::apply_formats(cfg, *o.formats);
  if (o.out) cfg.output = *o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-invariant space generator toolkit"};
  app.set_version_flag("--version", cli::version());
  app.require_subcommand(1);

  Overrides construct_opts;
  Overrides analyze_opts;
  Overrides compare_opts;
  auto* construct = app.add_subcommand("construct", "write spectrum.csv, signal.csv and meta.json");
  auto* analyze = app.add_subcommand("analyze", "run analyses and write report.json");
  auto* compare = app.add_subcommand("compare", "tabulate several generators side by side");
  add_common(construct, construct_opts, false);
  add_common(analyze, analyze_opts, false);
  add_common(compare, compare_opts, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*construct || *analyze) {
      const auto& o = *construct ? construct_opts : analyze_opts;
      const std::optional<std::string> file =
          o.configs.empty() ? std::nullopt : std::optional(o.configs.front());
      const auto cfg = build_config(file, o);
      const auto result = *construct ? cli::cmd_construct(cfg) : cli::cmd_analyze(cfg);
      for (const auto& f : result.files) std::cout << f.string() << '\n';
    } else {
      std::vector<cli::RunConfig> configs;
      for (const auto& file : compare_opts.configs) configs.push_back(build_config(file, compare_opts));
      const fs::path out = compare_opts.out ? fs::path(*compare_opts.out)
                                            : (configs.empty() ? fs::path("sispace_out")
                                                               : configs.front().output);
      const auto result = cli::cmd_compare(configs, out);
      std::cout << result.text;
    }
  } catch (const std::exception& e) {
    std::cerr << "sispace: " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
  return 0;
}
