#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lockkey/config.hpp"
#include "lockkey/construction.hpp"
#include "lockkey/grid.hpp"
#include "lockkey/rng.hpp"

namespace lockkey {

enum ExitStatus : int {
  kExitOk = 0,        // verdict or check passed
  kExitNegative = 1,  // computed negative result
  kExitUsage = 2,     // usage, config or I/O error
  kExitNumeric = 3,   // numeric failure
};

inline constexpr std::string_view kSubcommands[] = {"spectrum",  "construct",  "verify",
                                                    "scan-size", "scan-alpha", "oracle-check"};

struct CliOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides output.directory
  std::optional<std::filesystem::path> dump_operator;
  std::optional<std::filesystem::path> dump_fields;
  std::uint64_t seed = 1;
};

struct Artifact {
  std::filesystem::path path;
  std::size_t rows = 0;  // CSV data rows; 0 for JSON
};

struct RunReport {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json result;  // subcommand payload (same content as its JSON artifact)
  std::vector<Artifact> artifacts;
  std::vector<std::pair<std::string, double>> timings;  // stage, seconds

  /// Config echo, timings, artifacts and payload. Timings make this
  /// non-reproducible; the artifact files themselves carry no timings.
  nlohmann::json to_json(const RunConfig& config) const;
};

/// Runs one subcommand; never throws, failures map onto exit_code.
RunReport run_subcommand(std::string_view name, const RunConfig& config,
                         const CliOptions& options = {});

/// JSON of one evaluated quartet in the construct/verify schema.
nlohmann::json evaluation_json(const Evaluation& eval, const DomainGrid& grid);

nlohmann::json config_json(const RunConfig& config);

/// Seeded field with values uniform in [low, high).
Field random_field(const GridPtr& grid, Lcg64& rng, double low, double high);

}  // namespace lockkey
