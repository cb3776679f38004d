#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace formation {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitRuntime = 2,
  kExitPropertyFailure = 3,
};

struct RunRequest {
  std::filesystem::path scenario;
  std::filesystem::path out_dir = ".";
  std::vector<std::string> overrides;  // "dotted.key=value"
  std::size_t decimate = 1;
  std::optional<std::uint64_t> seed;
};

/// Writes log.csv, metrics.json and scenario.cfg (the resolved scenario)
/// into out_dir.
int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err);

/// Prints one PASS/FAIL line per property.
int cmd_check(const std::string& suite, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace formation
