#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lockkey/construction.hpp"
#include "lockkey/grid.hpp"
#include "lockkey/kernel.hpp"

namespace lockkey {

/// One member Q(r) of the nested family.
struct ScalingRow {
  double scale = 0.0;
  double mes_q = 0.0;
  std::array<double, 3> lambda{};  // lambda_1..lambda_3
  double f_max = 0.0;              // max |F| over the study's modes
  double r1_max = 0.0;             // max |R1|
  double c_ratio = 0.0;            // f_max / mes_q
  bool failed = false;
  std::string error;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;   // in the order of the requested scales
  std::optional<double> slope;    // least-squares slope of log f_max on log mes_q
  double c_constant = 0.0;        // max c_ratio
  double r0 = 0.0;                // largest scale
  bool partial = false;           // some row failed
};

/// Fresh grid, operator, spectrum and F-matrix per scale; node count fixed.
ScalingStudy scaling_study(const Kernel& kernel, const GridSpec& base,
                           std::span<const double> scales, std::span<const int> modes);

/// Least-squares slope of y on x; empty with fewer than two points.
std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y);

struct ShrinkRow {
  double scale = 0.0;
  double mes_q = 0.0;
  double worst_margin = 0.0;
  bool passed = false;
};

struct ShrinkStudy {
  std::vector<ShrinkRow> rows;             // sorted by descending scale
  std::optional<double> threshold_mes_q;   // largest mes Q from which every smaller domain passes
};

/// Worst margin of a fixed (modes, alpha) quartet along the nested family.
ShrinkStudy shrinking_margins(const Kernel& kernel, const GridSpec& base,
                              std::span<const double> scales, ModeTriple modes, double alpha,
                              double margin_floor_rel = 1e-8);

}  // namespace lockkey
