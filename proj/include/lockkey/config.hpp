#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lockkey/construction.hpp"
#include "lockkey/grid.hpp"
#include "lockkey/kernel.hpp"

namespace lockkey {

/// Parse or validation failure, pointing at the offending line and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);

  int line() const { return line_; }  // 0 when no single line is at fault
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Validated run configuration.
///
/// Text format: one `section.key = value` per line, `#` starts a comment,
/// lists are comma separated. `kernel.family` and `grid.dimension` are
/// required; everything else has a default.
struct RunConfig {
  // kernel
  KernelFamily kernel_family = KernelFamily::GaussianAttractive;
  double kernel_amplitude = 1.0;
  double kernel_width = 0.5;
  // grid
  GridSpec grid;
  // modes
  ModeTriple modes{1, 2, 3};
  int search_count = 0;  // > 0: construct searches triples over the first search_count modes
  bool skip_degenerate = false;
  // alpha
  std::optional<double> alpha;
  std::vector<double> alpha_grid = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  // scan
  std::vector<double> scan_scales = {1.0, 0.5, 0.25, 0.125};
  std::vector<double> search_scales;  // empty: grid.scale only
  // output
  std::filesystem::path output_directory = ".";
  // tolerances
  double eigen_residual = 1e-8;   // relative to |lambda_1|
  double neutrality = 1e-10;
  double margin_floor = 1e-8;     // relative to |lambda_1|
  double oracle = 1e-8;

  Kernel kernel() const { return Kernel(kernel_family, kernel_amplitude, kernel_width); }
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical `section.key = value` rendering; parse_config(to_text(c)) == c.
std::string to_text(const RunConfig& config);

}  // namespace lockkey
