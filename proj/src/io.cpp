#include "lockkey/io.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "lockkey/errors.hpp"

namespace lockkey {

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  fs::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw fs::filesystem_error("cannot open for writing", temp,
                                 std::make_error_code(std::errc::io_error));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw fs::filesystem_error("write failed", temp, std::make_error_code(std::errc::io_error));
    }
  }
  fs::rename(temp, path);
}

std::string spectrum_csv(const SpectralDecomposition& dec) {
  std::string out = "index,lambda\n";
  for (int m = 1; m <= dec.mode_count(); ++m) {
    out += fmt::format("{},{}\n", m, format_double(dec.eigenvalue(m)));
  }
  return out;
}

std::string field_csv(const Field& field) {
  const DomainGrid& grid = *field.grid();
  std::string out = "node_index";
  for (int axis = 1; axis <= grid.dimension(); ++axis) {
    out += fmt::format(",x{}", axis);
  }
  out += ",value\n";
  for (Eigen::Index a = 0; a < grid.node_count(); ++a) {
    out += std::to_string(a);
    for (int axis = 0; axis < grid.dimension(); ++axis) {
      out += ',';
      out += format_double(grid.nodes()(a, axis));
    }
    out += ',';
    out += format_double(field.values()(a));
    out += '\n';
  }
  return out;
}

std::string operator_csv(const OperatorMatrix& op) {
  std::string out = "row,col,value\n";
  const Eigen::MatrixXd& k = op.entries();
  for (Eigen::Index row = 0; row < k.rows(); ++row) {
    for (Eigen::Index col = 0; col <= row; ++col) {
      out += fmt::format("{},{},{}\n", row, col, format_double(k(row, col)));
    }
  }
  return out;
}

std::string scaling_csv(const ScalingStudy& study) {
  std::string out = "r,mes_q,lambda_1,lambda_2,lambda_3,f_max,r1_max,c_ratio\n";
  for (const ScalingRow& row : study.rows) {
    if (row.failed) {
      out += fmt::format("{},nan,nan,nan,nan,nan,nan,nan\n", format_double(row.scale));
      continue;
    }
    out += fmt::format("{},{},{},{},{},{},{},{}\n", format_double(row.scale),
                       format_double(row.mes_q), format_double(row.lambda[0]),
                       format_double(row.lambda[1]), format_double(row.lambda[2]),
                       format_double(row.f_max), format_double(row.r1_max),
                       format_double(row.c_ratio));
  }
  return out;
}

std::size_t csv_rows(std::string_view csv) {
  const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  return lines == 0 ? 0 : lines - 1;
}

}  // namespace lockkey
