#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace surflab::cli {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::string config_path;  ///< recorded in the sidecar only
};

struct RunOutcome {
  bool passed = true;              ///< every asserted invariant held
  json summary = json::object();
  std::vector<std::string> files;  ///< written data files and the sidecar, in order
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand on a parsed config, writing CSV data and a JSON sidecar.
/// Throws ConfigInvalid for config problems and library errors otherwise.
RunOutcome execute(const std::string& subcommand, const json& config, const RunOptions& opt);

/// Reads the config file and runs; returns the process exit status
/// (0 passed, 1 invariant failed, 2 config or usage error, 3 runtime error).
int run_file(const std::string& subcommand, const RunOptions& opt);

}  // namespace surflab::cli
