#pragma once

#include "blkit/json_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace blkit::cli {

const std::vector<std::string>& verbs();

struct Command {
  std::string verb;
  std::string input;
  std::optional<std::string> output;
  std::optional<std::string> config_file;  // defaults file, normally from BLKIT_CONFIG
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<int> restarts;
  std::optional<std::size_t> budget;  // expansion subset budget
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<double> certify;
};

enum ExitCode { kSuccess = 0, kFail = 1, kInputError = 2, kNumericalError = 3 };

struct RunResult {
  int exit_code = kSuccess;
  io::Json report;
};

/// Defaults, then the defaults file, then explicit flags.
io::RunConfig resolve_config(const Command& cmd);

/// Reads the input file, dispatches on the verb and builds the report. Never
/// throws: failures become an "error" field and a non-zero exit code.
RunResult run(const Command& cmd);

/// Pretty-printed report with a trailing newline.
std::string render(const io::Json& report);

}  // namespace blkit::cli
