#include "lockkey/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "lockkey/errors.hpp"
#include "lockkey/io.hpp"

namespace lockkey {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("config line {}: {}: {}", line, key, message)
                                  : fmt::format("config: {}: {}", key, message)),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  int line;
  std::string key;
  std::string value;
};

class Reader {
 public:
  explicit Reader(const Entry& entry) : entry_(entry) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(entry_.line, entry_.key, message);
  }

  double real() const {
    return parse_real(trim(entry_.value));
  }

  double positive() const {
    const double v = real();
    if (!(v > 0.0)) fail("must be > 0");
    return v;
  }

  double non_negative() const {
    const double v = real();
    if (!(v >= 0.0)) fail("must be >= 0");
    return v;
  }

  long long integer() const {
    const std::string_view text = trim(entry_.value);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      fail(fmt::format("malformed integer '{}'", text));
    }
    return v;
  }

  bool boolean() const {
    const std::string_view text = trim(entry_.value);
    if (text == "true") return true;
    if (text == "false") return false;
    fail(fmt::format("expected true or false, got '{}'", text));
  }

  std::vector<double> real_list() const {
    std::vector<double> values;
    std::string_view rest = entry_.value;
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_real(trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return values;
  }

  std::string_view text() const { return trim(entry_.value); }

 private:
  double parse_real(std::string_view text) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
        !std::isfinite(v)) {
      fail(fmt::format("malformed number '{}'", text));
    }
    return v;
  }

  const Entry& entry_;
};

using Setter = std::function<void(RunConfig&, const Reader&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"kernel.family",
       [](RunConfig& c, const Reader& r) {
         try {
           c.kernel_family = parse_kernel_family(r.text());
         } catch (const InputError& e) {
           r.fail(e.what());
         }
       }},
      {"kernel.amplitude", [](RunConfig& c, const Reader& r) { c.kernel_amplitude = r.positive(); }},
      {"kernel.width", [](RunConfig& c, const Reader& r) { c.kernel_width = r.positive(); }},
      {"grid.dimension",
       [](RunConfig& c, const Reader& r) {
         const long long d = r.integer();
         if (d < 1 || d > 3) r.fail("must be 1, 2 or 3");
         c.grid.dimension = static_cast<int>(d);
       }},
      {"grid.box_side", [](RunConfig& c, const Reader& r) { c.grid.box_side = r.positive(); }},
      {"grid.cells_per_axis",
       [](RunConfig& c, const Reader& r) {
         const long long n = r.integer();
         if (n < 1) r.fail("must be >= 1");
         if (n > 1'000'000) r.fail("too large");
         c.grid.cells_per_axis = static_cast<int>(n);
       }},
      {"grid.scale", [](RunConfig& c, const Reader& r) { c.grid.scale = r.positive(); }},
      {"grid.max_nodes",
       [](RunConfig& c, const Reader& r) {
         const long long n = r.integer();
         if (n < 1) r.fail("must be >= 1");
         c.grid.max_nodes = static_cast<std::size_t>(n);
       }},
      {"modes.i", [](RunConfig& c, const Reader& r) { c.modes.i = static_cast<int>(r.integer()); }},
      {"modes.j", [](RunConfig& c, const Reader& r) { c.modes.j = static_cast<int>(r.integer()); }},
      {"modes.k", [](RunConfig& c, const Reader& r) { c.modes.k = static_cast<int>(r.integer()); }},
      {"modes.search_count",
       [](RunConfig& c, const Reader& r) {
         const long long n = r.integer();
         if (n != 0 && n < 3) r.fail("must be 0 (fixed triple) or >= 3");
         c.search_count = static_cast<int>(n);
       }},
      {"modes.skip_degenerate",
       [](RunConfig& c, const Reader& r) { c.skip_degenerate = r.boolean(); }},
      {"alpha.value",
       [](RunConfig& c, const Reader& r) {
         const double a = r.real();
         if (!(a > 0.0 && a < 1.0)) r.fail("must lie in (0, 1)");
         c.alpha = a;
       }},
      {"alpha.grid",
       [](RunConfig& c, const Reader& r) {
         auto values = r.real_list();
         for (double a : values) {
           if (!(a > 0.0 && a < 1.0)) r.fail("entries must lie in (0, 1)");
         }
         c.alpha_grid = std::move(values);
       }},
      {"scan.scales",
       [](RunConfig& c, const Reader& r) {
         auto values = r.real_list();
         for (double s : values) {
           if (!(s > 0.0)) r.fail("entries must be > 0");
         }
         c.scan_scales = std::move(values);
       }},
      {"scan.search_scales",
       [](RunConfig& c, const Reader& r) {
         auto values = r.real_list();
         for (double s : values) {
           if (!(s > 0.0)) r.fail("entries must be > 0");
         }
         c.search_scales = std::move(values);
       }},
      {"output.directory",
       [](RunConfig& c, const Reader& r) {
         if (r.text().empty()) r.fail("must not be empty");
         c.output_directory = std::string(r.text());
       }},
      {"tolerances.eigen_residual",
       [](RunConfig& c, const Reader& r) { c.eigen_residual = r.positive(); }},
      {"tolerances.neutrality", [](RunConfig& c, const Reader& r) { c.neutrality = r.positive(); }},
      {"tolerances.margin_floor",
       [](RunConfig& c, const Reader& r) { c.margin_floor = r.non_negative(); }},
      {"tolerances.oracle", [](RunConfig& c, const Reader& r) { c.oracle = r.positive(); }},
  };
  return table;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t p = 0; p < values.size(); ++p) {
    if (p) out += ", ";
    out += format_double(values[p]);
  }
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_number = 0;
  std::istringstream stream{std::string(text)};
  std::string raw;
  while (std::getline(stream, raw)) {
    ++line_number;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_number, std::string(line), "expected 'section.key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!setters().contains(key)) {
      throw ConfigError(line_number, key, "unknown key");
    }
    if (entries.contains(key)) {
      throw ConfigError(line_number, key,
                        fmt::format("duplicate key (first set on line {})", entries[key].line));
    }
    entries[key] = Entry{line_number, key, std::string(trim(line.substr(eq + 1)))};
  }

  for (const char* required : {"kernel.family", "grid.dimension"}) {
    if (!entries.contains(required)) {
      throw ConfigError(0, required, "missing required key");
    }
  }

  RunConfig config;
  for (const auto& [key, entry] : entries) {
    setters().at(key)(config, Reader(entry));
  }

  auto line_of = [&entries](const char* key) {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };
  const ModeTriple& m = config.modes;
  if (m.i < 1 || m.j < 1 || m.k < 1) {
    throw ConfigError(std::max({line_of("modes.i"), line_of("modes.j"), line_of("modes.k")}),
                      "modes", "mode indices must be >= 1");
  }
  if (m.i == m.j || m.i == m.k || m.j == m.k) {
    const char* key = m.i == m.j ? "modes.j" : "modes.k";
    throw ConfigError(line_of(key), key, "modes.i, modes.j and modes.k must be distinct");
  }
  if (config.alpha_grid.empty()) {
    throw ConfigError(line_of("alpha.grid"), "alpha.grid", "must not be empty");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(0, path.string(), "cannot open config file");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_text(const RunConfig& c) {
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  put("kernel.family", std::string(to_string(c.kernel_family)));
  put("kernel.amplitude", format_double(c.kernel_amplitude));
  put("kernel.width", format_double(c.kernel_width));
  put("grid.dimension", std::to_string(c.grid.dimension));
  put("grid.box_side", format_double(c.grid.box_side));
  put("grid.cells_per_axis", std::to_string(c.grid.cells_per_axis));
  put("grid.scale", format_double(c.grid.scale));
  put("grid.max_nodes", std::to_string(c.grid.max_nodes));
  put("modes.i", std::to_string(c.modes.i));
  put("modes.j", std::to_string(c.modes.j));
  put("modes.k", std::to_string(c.modes.k));
  put("modes.search_count", std::to_string(c.search_count));
  put("modes.skip_degenerate", c.skip_degenerate ? "true" : "false");
  if (c.alpha) put("alpha.value", format_double(*c.alpha));
  put("alpha.grid", join(c.alpha_grid));
  put("scan.scales", join(c.scan_scales));
  if (!c.search_scales.empty()) put("scan.search_scales", join(c.search_scales));
  put("output.directory", c.output_directory.string());
  put("tolerances.eigen_residual", format_double(c.eigen_residual));
  put("tolerances.neutrality", format_double(c.neutrality));
  put("tolerances.margin_floor", format_double(c.margin_floor));
  put("tolerances.oracle", format_double(c.oracle));
  return out;
}

}  // namespace lockkey
