#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "lockkey/grid.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/scaling.hpp"
#include "lockkey/spectral.hpp"

namespace lockkey {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// `index,lambda`, one row per retained mode, 1-based ascending index.
std::string spectrum_csv(const SpectralDecomposition& dec);

/// `node_index,x1[,x2[,x3]],value`.
std::string field_csv(const Field& field);

/// `row,col,value` for the lower triangle (col <= row).
std::string operator_csv(const OperatorMatrix& op);

/// `r,mes_q,lambda_1,lambda_2,lambda_3,f_max,r1_max,c_ratio`.
std::string scaling_csv(const ScalingStudy& study);

/// Number of data rows (lines after the header) in a CSV string.
std::size_t csv_rows(std::string_view csv);

}  // namespace lockkey
