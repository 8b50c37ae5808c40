#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "sispace/commands.hpp"
#include "sispace/errors.hpp"
#include "sispace/reports.hpp"

namespace fs = std::filesystem;
using namespace sispace;
using namespace sispace::cli;
using Json = nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sispace_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig config_for(const std::string& generator_json, const fs::path& out) {
  RunConfig c;
  c.generator = parse_generator_spec(generator_json, out);
  c.output = out;
  // shorter windows keep the analytic psi time profiles cheap
  c.params.windows = {2, 4, 8, 16};
  return c;
}

#ifdef SISPACE_EXE
int run_tool(const std::string& args) {
  const std::string cmd = std::string(SISPACE_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

}  // namespace

TEST(ParseConfig, FullDocument) {
  const auto cfg = parse_run_config(R"({
    "generator": {"variant": "psi", "alpha": 1, "beta": 2, "n": 2},
    "grid": [1024, 1024],
    "analyses": ["invariance", "periodization", "invariance"],
    "parameters": {"eps": 0.25, "n_max": 4, "J": 3, "windows": [2, 4, 8, 16]},
    "output": "out",
    "formats": ["json"]
  })", "/base");
  const auto* p = std::get_if<generators::PsiParams>(&cfg.generator);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->J, 3);
  ASSERT_TRUE(cfg.grid);
  EXPECT_EQ(cfg.grid->samples_per_unit, 1024);
  EXPECT_EQ(cfg.analyses, (std::vector<Analysis>{Analysis::Periodization, Analysis::Invariance}));
  EXPECT_EQ(cfg.params.epsilon, 0.25);
  EXPECT_EQ(cfg.params.n_max, 4);
  EXPECT_EQ(cfg.output, fs::path("/base/out"));
  EXPECT_TRUE(cfg.write_json);
  EXPECT_FALSE(cfg.write_csv);
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_run_config("{", "."), ConfigError);
  EXPECT_THROW(parse_run_config("[]", "."), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"grid": "auto"})", "."), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"generator": {"variant": "gabor"}})", "."), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"generator": {"variant": "bspline", "degree": 30}})", "."),
               ConfigError);
  EXPECT_THROW(parse_run_config(R"({"generator": {"variant": "sinc"}, "analyses": ["wavelets"]})", "."),
               ConfigError);
  EXPECT_THROW(parse_run_config(R"({"generator": {"variant": "sinc"}, "parameters": {"windows": [1, 2]}})", "."),
               ConfigError);
}

TEST(ParseOptions, Shorthands) {
  EXPECT_TRUE(std::holds_alternative<generators::Sinc>(parse_generator_option("sinc", ".")));
  EXPECT_EQ(std::get<generators::BSpline>(parse_generator_option("bspline:3", ".")).degree, 3);
  const auto psi = std::get<generators::PsiParams>(parse_generator_option("psi:3,1,2", ".", 4));
  EXPECT_EQ(psi.alpha, 3.0);
  EXPECT_EQ(psi.J, 4);
  EXPECT_EQ(std::get<generators::PsiParams>(parse_generator_option("psi:1,2,2,6", ".")).J, 6);
  EXPECT_THROW(parse_generator_option("psi:1,2", "."), ConfigError);
  EXPECT_FALSE(parse_grid_option("auto"));
  EXPECT_EQ(parse_grid_option("256,512")->half_range, 512);
  EXPECT_THROW(parse_grid_option("256"), ConfigError);
  EXPECT_EQ(parse_windows("4,8,16,32"), (std::vector<double>{4, 8, 16, 32}));
  EXPECT_THROW(parse_windows("4,8,16"), ConfigError);
}

TEST(Construct, PsiMetaEchoesBlockArithmetic) {
  const auto dir = scratch("construct_psi");
  auto cfg = config_for(R"({"variant":"psi","alpha":1,"beta":2,"n":2,"J":4})", dir);
  cfg.write_csv = false;
  cmd_construct(cfg);
  const auto meta = Json::parse(slurp(dir / "meta.json"));
  EXPECT_EQ(meta["beta_j"], Json({1, 4, 16, 64}));
  EXPECT_EQ(meta["gamma_j"], Json({0, 1, 5, 21}));
  EXPECT_EQ(meta["grid"]["S"], 1024);
  EXPECT_EQ(meta["grid"]["Xi"], 1024);
}

TEST(Construct, SincHasTwoHalfEndpoints) {
  const auto dir = scratch("construct_sinc");
  cmd_construct(config_for(R"({"variant":"sinc"})", dir));
  const auto rows = lines_of(slurp(dir / "spectrum.csv"));
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0], "index,xi,re,im");
  int halves = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    ASSERT_EQ(cells.size(), 4u);
    const double re = std::stod(cells[2]);
    if (re == 0.5) {
      ++halves;
      EXPECT_DOUBLE_EQ(std::abs(std::stod(cells[1])), 0.5);
    } else {
      EXPECT_EQ(re, 1.0);
    }
  }
  EXPECT_EQ(halves, 2);
  EXPECT_TRUE(fs::exists(dir / "signal.csv"));
}

TEST(Construct, DegreeCap) {
  EXPECT_THROW(config_for(R"({"variant":"bspline","degree":30})", "."), ConfigError);
}

TEST(Analyze, SincInvarianceGroup) {
  const auto dir = scratch("analyze_sinc");
  auto cfg = config_for(R"({"variant":"sinc"})", dir);
  cfg.analyses = {Analysis::Invariance};
  const auto report = Json::parse(cmd_analyze(cfg).text);
  EXPECT_EQ(report["results"]["invariance"]["invariance_group"], "R-candidate");
  EXPECT_EQ(report["grid"]["mode"], "auto");
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "timings.json"));
}

TEST(Analyze, PeriodizationSections) {
  const auto dir = scratch("analyze_periodization");
  auto cfg = config_for(R"({"variant":"bspline","degree":1})", dir);
  cfg.analyses = {Analysis::Periodization};
  auto r = Json::parse(cmd_analyze(cfg).text)["results"]["periodization"];
  EXPECT_NEAR(r["m"].get<double>(), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(r["M"].get<double>(), 1.0, 1e-10);
  EXPECT_TRUE(fs::exists(dir / "periodization.csv"));

  cfg = config_for(R"({"variant":"psi","alpha":1,"beta":2,"n":2,"J":4})", dir);
  cfg.analyses = {Analysis::Periodization};
  r = Json::parse(cmd_analyze(cfg).text)["results"]["periodization"];
  EXPECT_NEAR(r["m"].get<double>(), 1.0, 1e-3);
  EXPECT_NEAR(r["M"].get<double>(), 1.0, 1e-3);
  EXPECT_LT(r["orthonormality_defect"].get<double>(), 1e-3);
  ASSERT_TRUE(r["excluded_band"].is_array());
  EXPECT_DOUBLE_EQ(r["excluded_band"][0].get<double>(), 0.5 - 1.0 / 32);
}

TEST(Analyze, ErrorsCarryAnalysisName) {
  const auto dir = scratch("analyze_error");
  auto cfg = config_for(R"({"variant":"sinc"})", dir);
  cfg.analyses = {Analysis::Decay};
  cfg.params.windows = {4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};
  try {
    cmd_analyze(cfg);
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("decay"), std::string::npos) << e.what();
  }
}

TEST(Analyze, ByteIdenticalReports) {
  const auto dir = scratch("analyze_determinism");
  auto cfg = config_for(R"({"variant":"bspline","degree":2})", dir);
  cfg.analyses = {Analysis::Periodization, Analysis::Invariance, Analysis::Decay,
                  Analysis::Pointwise, Analysis::Gates};
  cmd_analyze(cfg);
  const auto first = slurp(dir / "report.json");
  cmd_analyze(cfg);
  EXPECT_EQ(slurp(dir / "report.json"), first);
}

TEST(Compare, QualitativeTriangle) {
  const auto dir = scratch("compare_triangle");
  std::vector<RunConfig> cfgs{config_for(R"({"variant":"sinc"})", dir),
                              config_for(R"({"variant":"bspline","degree":1})", dir),
                              config_for(R"({"variant":"psi","alpha":1,"beta":2,"n":2,"J":4})", dir)};
  const auto rows = lines_of(cmd_compare(cfgs, dir).text);
  ASSERT_EQ(rows.size(), 4u);
  const auto header = split(rows[0]);
  auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
  };
  const auto sinc = split(rows[1]);
  const auto hat = split(rows[2]);
  const auto psi = split(rows[3]);
  EXPECT_EQ(sinc[col("invariance_group")], "R-candidate");
  EXPECT_EQ(sinc[col("l1_verdict")], "diverging");
  EXPECT_EQ(hat[col("invariance_group")], "Z");
  EXPECT_EQ(hat[col("l1_verdict")], "converging");
  EXPECT_EQ(hat[col("n2")], "fail");
  EXPECT_EQ(psi[col("invariance_group")], "(1/2)Z");
  EXPECT_EQ(psi[col("n2")], "pass");
  EXPECT_EQ(sinc[col("freq_integrability_ok")], "n/a");
  EXPECT_TRUE(fs::exists(dir / "compare.csv"));
}

TEST(Compare, DuplicateConfigsGiveIdenticalRows) {
  const auto dir = scratch("compare_dup");
  const auto c = config_for(R"({"variant":"bspline","degree":2})", dir);
  const auto rows = lines_of(cmd_compare({c, c}, dir).text);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1], rows[2]);
  EXPECT_THROW(cmd_compare({c}, dir), ConfigError);
}

TEST(Compare, GateColumnSeparatesPsiFamilies) {
  const auto dir = scratch("compare_gates");
  const auto rows = lines_of(cmd_compare({config_for(R"({"variant":"psi","alpha":3,"beta":1,"n":2,"J":3})", dir),
                                          config_for(R"({"variant":"psi","alpha":1,"beta":2,"n":2,"J":3})", dir)},
                                         dir)
                                 .text);
  const auto header = split(rows[0]);
  const auto c = static_cast<std::size_t>(
      std::find(header.begin(), header.end(), "freq_integrability_ok") - header.begin());
  EXPECT_EQ(split(rows[1])[c], "true");
  EXPECT_EQ(split(rows[2])[c], "false");
}

TEST(RoundTrip, CustomSpectrumReproducesAnalyses) {
  const auto dir = scratch("roundtrip");
  const std::string psi = R"({"variant":"psi","alpha":1,"beta":2,"n":2,"J":3})";
  auto cfg = config_for(psi, dir);
  cmd_construct(cfg);
  cfg.analyses = {Analysis::Periodization, Analysis::Invariance, Analysis::Pointwise, Analysis::Gates};
  const auto original = Json::parse(cmd_analyze(cfg).text)["results"];

  auto restored = cfg;
  restored.generator = parse_generator_spec(R"({"variant":"custom","path":"spectrum.csv"})", dir);
  const auto again = Json::parse(cmd_analyze(restored).text)["results"];

  const std::function<void(const Json&, const Json&, const std::string&)> same =
      [&](const Json& a, const Json& b, const std::string& where) {
        ASSERT_EQ(a.type(), b.type()) << where;
        if (a.is_number_float()) {
          EXPECT_NEAR(a.get<double>(), b.get<double>(), 1e-12 * std::max(1.0, std::abs(a.get<double>())))
              << where;
        } else if (a.is_object()) {
          for (auto it = a.begin(); it != a.end(); ++it) {
            ASSERT_TRUE(b.contains(it.key())) << where << "/" << it.key();
            same(it.value(), b.at(it.key()), where + "/" + it.key());
          }
        } else if (a.is_array()) {
          ASSERT_EQ(a.size(), b.size()) << where;
          for (std::size_t i = 0; i < a.size(); ++i) same(a[i], b[i], where + "[" + std::to_string(i) + "]");
        } else {
          EXPECT_EQ(a, b) << where;
        }
      };
  same(original, again, "results");
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), 2);
  EXPECT_EQ(exit_code_for(PreconditionError("x")), 3);
  EXPECT_EQ(exit_code_for(GridTooSmallError("x", 171)), 3);
  EXPECT_EQ(exit_code_for(IoError("x")), 4);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 1);
}

TEST(ExitCodes, Tool) {
#ifndef SISPACE_EXE
  GTEST_SKIP() << "command-line tool not built";
#else
  const auto dir = scratch("tool");
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_tool("--version"), 0);
  EXPECT_EQ(run_tool("construct --generator sinc" + out), 0);
  EXPECT_EQ(run_tool("analyze --generator bspline:1 --analyses periodization" + out), 0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_EQ(run_tool("construct --generator bspline:30" + out), 2);
  EXPECT_EQ(run_tool("construct --bogus-flag"), 2);
  EXPECT_EQ(run_tool("construct --generator psi:1,2,2,4 --grid 64,64" + out), 3);
  EXPECT_EQ(run_tool("construct --generator sinc --out /proc/sispace_forbidden"), 4);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_EQ(run_tool("analyze --config " + (dir / "bad.json").string()), 2);
#endif
}
