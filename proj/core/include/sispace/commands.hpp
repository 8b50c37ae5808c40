#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sispace/reports.hpp"

namespace sispace::cli {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  /// report.json text for analyze, the CSV table for compare, meta.json for construct.
  std::string text;
};

/// spectrum.csv, signal.csv and meta.json for the configured generator.
CommandResult cmd_construct(const RunConfig& config);

/// report.json (deterministic), timings.json and CSV tables.
CommandResult cmd_analyze(const RunConfig& config);

/// compare.csv with one row per config, written to out_dir.
CommandResult cmd_compare(const std::vector<RunConfig>& configs, const std::filesystem::path& out_dir);

/// Process exit code for an exception escaping a command: 2 config, 3 numeric
/// precondition, 4 I/O, 1 anything else.
int exit_code_for(const std::exception& e);

std::string version();

}  // namespace sispace::cli
