#include "lockkey/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "lockkey/errors.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/spectral.hpp"

namespace lockkey {

std::optional<double> least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    return std::nullopt;
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t p = 0; p < x.size(); ++p) {
    sxy += (x[p] - mx) * (y[p] - my);
    sxx += (x[p] - mx) * (x[p] - mx);
  }
  if (sxx == 0.0) {
    return std::nullopt;
  }
  return sxy / sxx;
}

ScalingStudy scaling_study(const Kernel& kernel, const GridSpec& base,
                           std::span<const double> scales, std::span<const int> modes) {
  if (scales.empty()) {
    throw InputError("scaling study needs at least one scale");
  }
  ScalingStudy study;
  std::vector<double> log_mes;
  std::vector<double> log_f;
  for (double scale : scales) {
    if (!(scale > 0.0)) {
      throw InputError("scaling study scales must be positive");
    }
    ScalingRow row;
    row.scale = scale;
    try {
      GridSpec spec = base;
      spec.scale = scale;
      const OperatorMatrix op = assemble_operator(build_grid(spec), kernel);
      const SpectralDecomposition dec = eigendecompose(op);
      row.mes_q = op.grid()->measure();
      for (int m = 0; m < 3; ++m) {
        row.lambda[m] = m < dec.mode_count() ? dec.eigenvalue(m + 1) : 0.0;
      }
      row.f_max = f_matrix(op, dec, modes).max_abs();
      row.r1_max = r_one_max(op);
      row.c_ratio = row.f_max / row.mes_q;
    } catch (const ContractError&) {
      throw;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      study.partial = true;
    }
    if (!row.failed) {
      study.c_constant = std::max(study.c_constant, row.c_ratio);
      if (row.f_max > 0.0) {
        log_mes.push_back(std::log(row.mes_q));
        log_f.push_back(std::log(row.f_max));
      }
    }
    study.r0 = std::max(study.r0, scale);
    study.rows.push_back(std::move(row));
  }
  study.slope = least_squares_slope(log_mes, log_f);
  return study;
}

ShrinkStudy shrinking_margins(const Kernel& kernel, const GridSpec& base,
                              std::span<const double> scales, ModeTriple modes, double alpha,
                              double margin_floor_rel) {
  ShrinkStudy study;
  for (double scale : scales) {
    GridSpec spec = base;
    spec.scale = scale;
    const OperatorMatrix op = assemble_operator(build_grid(spec), kernel);
    const SpectralDecomposition dec = eigendecompose(op);
    const double floor = margin_floor_rel * dec.spectral_radius();
    const Quartet quartet = build_quartet(dec, modes, alpha);
    const InteractionReport report = quartet_interactions(op, dec, quartet, floor);
    study.rows.push_back({scale, op.grid()->measure(), report.verdict.worst_margin,
                          report.verdict.passed});
  }
  std::sort(study.rows.begin(), study.rows.end(),
            [](const ShrinkRow& a, const ShrinkRow& b) { return a.scale > b.scale; });
  // Walk from the smallest domain upward while every row passes.
  for (auto row = study.rows.rbegin(); row != study.rows.rend() && row->passed; ++row) {
    study.threshold_mes_q = row->mes_q;
  }
  return study;
}

}  // namespace lockkey
