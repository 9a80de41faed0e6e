#include "lockkey/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "lockkey/errors.hpp"

namespace lockkey {

void ModeTriple::validate() const {
  if (i < 1 || j < 1 || k < 1) {
    throw ContractError(fmt::format("mode indices must be >= 1 (got {}, {}, {})", i, j, k));
  }
  if (i == j || i == k || j == k) {
    throw ContractError(fmt::format("mode indices must be distinct (got {}, {}, {})", i, j, k));
  }
}

Quartet build_quartet(const SpectralDecomposition& dec, ModeTriple modes, double alpha,
                      AlphaPolicy policy) {
  modes.validate();
  if (!std::isfinite(alpha) || alpha < 0.0 ||
      (alpha == 0.0 && policy == AlphaPolicy::Strict)) {
    throw InputError(fmt::format("alpha must be positive (got {})", alpha));
  }
  const Field pi = project_neutral(dec.eigenfield(modes.i));
  const Field pj = project_neutral(dec.eigenfield(modes.j));
  const Field shared = alpha * project_neutral(dec.eigenfield(modes.k));
  return Quartet{modes, alpha, pi + shared, shared - pi, pj + shared, shared - pj};
}

namespace {

// Signed term lists of the reconstructed interactions; each entry is a
// coefficient times a lambda or F value. Returning the terms lets the
// caller form both the sum and the sum of magnitudes.
std::array<std::vector<double>, 10> expansion_terms(const FMatrix& f,
                                                    const std::array<double, 3>& lambda,
                                                    ModeTriple m, double a) {
  const auto [i, j, k] = std::tuple{m.i, m.j, m.k};
  const double li = lambda[0];
  const double lj = lambda[1];
  const double lk = lambda[2];
  const double a2 = a * a;
  auto F = [&f](int p, int q) { return f.at(p, q); };
  return {{
      {-li, -F(i, i), a2 * lk, a2 * F(k, k)},                                    // phi_Phi
      {-lj, -F(j, j), a2 * lk, a2 * F(k, k)},                                    // psi_Psi
      {F(i, j), a * F(k, j), a * F(i, k), a2 * lk, a2 * F(k, k)},                // phi_psi
      {-F(i, j), a * F(i, k), -a * F(k, j), a2 * lk, a2 * F(k, k)},              // phi_Psi
      {-F(i, j), a * F(k, j), -a * F(i, k), a2 * lk, a2 * F(k, k)},              // Phi_psi
      {F(i, j), -a * F(k, j), -a * F(i, k), a2 * lk, a2 * F(k, k)},              // Phi_Psi
      {li, F(i, i), 2.0 * a * F(i, k), a2 * lk, a2 * F(k, k)},                   // phi_phi
      {li, F(i, i), -2.0 * a * F(i, k), a2 * lk, a2 * F(k, k)},                  // Phi_Phi
      {lj, F(j, j), 2.0 * a * F(j, k), a2 * lk, a2 * F(k, k)},                   // psi_psi
      {lj, F(j, j), -2.0 * a * F(j, k), a2 * lk, a2 * F(k, k)},                  // Psi_Psi
  }};
}

}  // namespace

Verdict verify_complementarity(const Eigen::Matrix4d& matrix, double margin_floor) {
  Verdict verdict;
  verdict.passed = true;
  verdict.worst_margin = std::numeric_limits<double>::infinity();
  for (const PairSpec& pair : kPairs) {
    const double value = matrix(pair.first, pair.second);
    const double margin = pair.attract ? value : -value;
    if (!(margin > margin_floor)) {
      verdict.passed = false;
      verdict.failing_pairs.emplace_back(pair.name);
    }
    if (margin < verdict.worst_margin || verdict.worst_pair.empty()) {
      verdict.worst_margin = margin;
      verdict.worst_pair = pair.name;
    }
  }
  return verdict;
}

Verdict verify_complementarity(const InteractionReport& report, double margin_floor) {
  return verify_complementarity(report.matrix, margin_floor);
}

InteractionReport quartet_interactions(const OperatorMatrix& op,
                                       const SpectralDecomposition& dec, const Quartet& q,
                                       double margin_floor) {
  InteractionReport report;
  const auto members = q.members();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      report.matrix(a, b) = interaction_force(op, *members[a], *members[b]);
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < a; ++b) {
      const double scale = std::max(std::abs(report.matrix(a, b)), std::abs(report.matrix(b, a)));
      if (scale > 0.0) {
        report.max_asymmetry = std::max(
            report.max_asymmetry, std::abs(report.matrix(a, b) - report.matrix(b, a)) / scale);
      }
    }
  }

  const std::array<int, 3> modes = {q.modes.i, q.modes.j, q.modes.k};
  const FMatrix f = f_matrix(op, dec, modes);
  const std::array<double, 3> lambda = {dec.eigenvalue(q.modes.i), dec.eigenvalue(q.modes.j),
                                        dec.eigenvalue(q.modes.k)};
  const auto terms = expansion_terms(f, lambda, q.modes, q.alpha);

  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const PairSpec& spec = kPairs[p];
    PairValue& value = report.pairs[p];
    value.name = spec.name;
    value.attract = spec.attract;
    value.direct = report.matrix(spec.first, spec.second);
    double magnitude = 0.0;
    for (double term : terms[p]) {
      value.expanded += term;
      magnitude += std::abs(term);
    }
    const double denominator = std::max(std::abs(value.direct), magnitude);
    value.discrepancy =
        denominator > 0.0 ? std::abs(value.direct - value.expanded) / denominator : 0.0;
    value.margin = spec.attract ? value.direct : -value.direct;
    report.max_discrepancy = std::max(report.max_discrepancy, value.discrepancy);
  }

  report.margin_floor = margin_floor;
  report.verdict = verify_complementarity(report.matrix, margin_floor);
  return report;
}

FeasibleWindow feasible_alpha(double lambda_i, double lambda_j, double lambda_k,
                              double f_max) {
  if (!(lambda_i < 0.0 && lambda_j < 0.0 && lambda_k < 0.0)) {
    throw ContractError("feasible_alpha needs strictly negative eigenvalues");
  }
  if (!(f_max >= 0.0) || !std::isfinite(f_max)) {
    throw ContractError("feasible_alpha needs a finite non-negative f_max");
  }
  const double lk = std::abs(lambda_k);
  const double lead = std::min(std::abs(lambda_i), std::abs(lambda_j));

  FeasibleWindow window;
  window.f_max = f_max;

  // (|l_k| - f) a^2 - 2 f a - f > 0  <=>  a > sqrt(f) / (sqrt|l_k| - sqrt f).
  double low;
  if (f_max == 0.0) {
    low = 0.0;
  } else if (lk <= f_max) {
    return window;  // never holds
  } else {
    low = std::sqrt(f_max) / (std::sqrt(lk) - std::sqrt(f_max));
  }

  // -(|l_k| + f) a^2 - 2 f a + (lead - f) > 0 holds below its positive root.
  if (lead <= f_max) {
    return window;
  }
  const double high =
      (-f_max + std::sqrt(f_max * f_max + (lk + f_max) * (lead - f_max))) / (lk + f_max);

  window.alpha_low = std::max(0.0, low);
  window.alpha_high = std::min(1.0, high);
  if (window.empty()) {
    window.alpha_low = window.alpha_high = 0.0;
  }
  return window;
}

Evaluation evaluate_configuration(const OperatorMatrix& op, const SpectralDecomposition& dec,
                                  ModeTriple modes, double alpha, double margin_floor) {
  Quartet quartet = build_quartet(dec, modes, alpha);
  const std::array<int, 3> indices = {modes.i, modes.j, modes.k};
  FMatrix f = f_matrix(op, dec, indices);
  const std::array<double, 3> lambdas = {dec.eigenvalue(modes.i), dec.eigenvalue(modes.j),
                                         dec.eigenvalue(modes.k)};
  FeasibleWindow window = feasible_alpha(lambdas[0], lambdas[1], lambdas[2], f.max_abs());
  InteractionReport report = quartet_interactions(op, dec, quartet, margin_floor);
  return Evaluation{std::move(quartet), std::move(f), lambdas, window, std::move(report)};
}

std::vector<ModeTriple> candidate_triples(const SpectralDecomposition& dec, int mode_count,
                                          bool skip_degenerate, double gap_rel) {
  const int count = std::min(mode_count, dec.mode_count());
  std::vector<int> usable;
  const double gap = gap_rel * dec.spectral_radius();
  for (int m = 1; m <= count; ++m) {
    if (skip_degenerate) {
      const bool near_prev = m > 1 && std::abs(dec.eigenvalue(m) - dec.eigenvalue(m - 1)) < gap;
      const bool near_next = m < dec.mode_count() &&
                             std::abs(dec.eigenvalue(m + 1) - dec.eigenvalue(m)) < gap;
      if (near_prev || near_next) continue;
    }
    usable.push_back(m);
  }
  std::vector<ModeTriple> triples;
  for (int i : usable) {
    for (int j : usable) {
      if (j <= i) continue;
      for (int k : usable) {
        if (k == i || k == j) continue;
        triples.push_back({i, j, k});
      }
    }
  }
  return triples;
}

namespace {

bool better(const Candidate& lhs, const Candidate& rhs) {
  if (lhs.passed != rhs.passed) {
    return lhs.passed;
  }
  const double scale = std::max(std::abs(lhs.worst_margin), std::abs(rhs.worst_margin));
  if (std::abs(lhs.worst_margin - rhs.worst_margin) > 1e-12 * scale) {
    return lhs.worst_margin > rhs.worst_margin;
  }
  return std::tie(lhs.modes, lhs.alpha, lhs.scale) < std::tie(rhs.modes, rhs.alpha, rhs.scale);
}

void validate_space(const SearchSpace& space) {
  if (space.alphas.empty()) {
    throw InputError("search needs a nonempty alpha grid");
  }
  for (double alpha : space.alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw InputError(fmt::format("search alpha {} outside (0, 1)", alpha));
    }
  }
  if (space.triples.empty() && space.mode_count < 3) {
    throw InputError("search needs at least three candidate modes");
  }
}

void search_domain(const OperatorMatrix& op, const SpectralDecomposition& dec,
                   const SearchSpace& space, SearchResult& result) {
  const std::vector<ModeTriple> triples =
      space.triples.empty() ? candidate_triples(dec, space.mode_count, space.skip_degenerate,
                                                space.degeneracy_gap_rel)
                            : space.triples;
  const double floor = space.margin_floor_rel * dec.spectral_radius();
  const GridPtr& grid = op.grid();

  for (const ModeTriple& modes : triples) {
    for (double alpha : space.alphas) {
      Evaluation eval = evaluate_configuration(op, dec, modes, alpha, floor);
      ++result.evaluated;

      Candidate candidate{modes,      alpha, grid->scale(), grid->measure(), floor,
                          eval.report.verdict.worst_margin, eval.report.verdict.passed};
      if (!eval.window.empty() && eval.window.contains(alpha)) {
        ++result.window_samples;
        if (!candidate.passed) {
          ++result.window_counterexamples;
          result.counterexamples.push_back(candidate);
        }
      }
      if (result.evaluated == 1 || better(candidate, result.best)) {
        result.best = candidate;
        result.best_report = eval.report;
        result.best_window = eval.window;
        result.best_lambdas = eval.lambdas;
        result.best_f_max = eval.f.max_abs();
      }
    }
  }
  result.found = result.found || result.best.passed;
}

}  // namespace

SearchResult search_parameters(const OperatorMatrix& op, const SpectralDecomposition& dec,
                               const SearchSpace& space) {
  validate_space(space);
  SearchResult result;
  search_domain(op, dec, space, result);
  return result;
}

SearchResult search_parameters(const Kernel& kernel, const GridSpec& base,
                               const SearchSpace& space) {
  validate_space(space);
  if (space.scales.empty()) {
    throw InputError("search needs at least one domain scale");
  }
  SearchResult result;
  for (double scale : space.scales) {
    GridSpec spec = base;
    spec.scale = scale;
    const OperatorMatrix op = assemble_operator(build_grid(spec), kernel);
    const SpectralDecomposition dec = eigendecompose(op);
    search_domain(op, dec, space, result);
  }
  return result;
}

}  // namespace lockkey
