#pragma once

#include <Eigen/Dense>
#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lockkey/grid.hpp"
#include "lockkey/kernel.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/spectral.hpp"

namespace lockkey {

/// Three pairwise distinct 1-based mode indices.
struct ModeTriple {
  int i = 1;
  int j = 2;
  int k = 3;

  void validate() const;  // throws ContractError on repeats or indices < 1
  auto operator<=>(const ModeTriple&) const = default;
};

/// The two lock/key pairs built from projected eigenfields:
///   phi = Pr e_i + a Pr e_k,   Phi = -Pr e_i + a Pr e_k,
///   psi = Pr e_j + a Pr e_k,   Psi = -Pr e_j + a Pr e_k.
struct Quartet {
  ModeTriple modes;
  double alpha = 0.0;
  Field phi;
  Field phi_cap;
  Field psi;
  Field psi_cap;

  /// Members in report order (phi, Phi, psi, Psi).
  std::array<const Field*, 4> members() const { return {&phi, &phi_cap, &psi, &psi_cap}; }
};

enum class AlphaPolicy {
  Strict,     // alpha > 0
  AllowZero,  // alpha >= 0, for diagnostics
};

Quartet build_quartet(const SpectralDecomposition& dec, ModeTriple modes, double alpha,
                      AlphaPolicy policy = AlphaPolicy::Strict);

inline constexpr std::array<std::string_view, 4> kMemberNames = {"phi", "Phi", "psi", "Psi"};

/// One of the ten independent interactions and the sign it must have.
struct PairSpec {
  std::string_view name;
  int first;   // index into (phi, Phi, psi, Psi)
  int second;
  bool attract;
};

inline constexpr std::array<PairSpec, 10> kPairs = {{
    {"phi_Phi", 0, 1, true},
    {"psi_Psi", 2, 3, true},
    {"phi_psi", 0, 2, false},
    {"phi_Psi", 0, 3, false},
    {"Phi_psi", 1, 2, false},
    {"Phi_Psi", 1, 3, false},
    {"phi_phi", 0, 0, false},
    {"Phi_Phi", 1, 1, false},
    {"psi_psi", 2, 2, false},
    {"Psi_Psi", 3, 3, false},
}};

struct PairValue {
  std::string_view name;
  bool attract = false;
  double direct = 0.0;       // bilinear double sum on the quartet fields
  double expanded = 0.0;     // rebuilt from lambda and F
  double discrepancy = 0.0;  // |direct - expanded| relative to the term magnitudes
  double margin = 0.0;       // direct for attracting pairs, -direct otherwise
};

struct Verdict {
  bool passed = false;
  double worst_margin = 0.0;
  std::string worst_pair;
  std::vector<std::string> failing_pairs;
};

struct InteractionReport {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();  // rows/cols phi, Phi, psi, Psi
  std::array<PairValue, 10> pairs{};
  double max_asymmetry = 0.0;     // max relative |matrix - matrix^T|
  double max_discrepancy = 0.0;
  double margin_floor = 0.0;
  Verdict verdict;
};

/// Direct interactions of the quartet plus their (lambda, F) reconstruction.
InteractionReport quartet_interactions(const OperatorMatrix& op,
                                       const SpectralDecomposition& dec, const Quartet& q,
                                       double margin_floor);

/// Checks the lock/key sign pattern on a 4x4 interaction matrix: the two key
/// pairs above +margin_floor, the other eight below -margin_floor.
Verdict verify_complementarity(const Eigen::Matrix4d& matrix, double margin_floor);
Verdict verify_complementarity(const InteractionReport& report, double margin_floor);

/// Open alpha interval on which, with rho(a) = f_max (1 + a)^2 bounding every
/// F-remainder,
///   a^2 |l_k| - rho(a) > 0                              (cross pairs repel)
///   min(|l_i|, |l_j|) - a^2 |l_k| - rho(a) > 0          (key pairs attract)
/// both hold, intersected with (0, 1).
struct FeasibleWindow {
  double alpha_low = 0.0;
  double alpha_high = 0.0;
  double f_max = 0.0;

  bool empty() const { return !(alpha_low < alpha_high); }
  bool contains(double alpha) const { return alpha_low < alpha && alpha < alpha_high; }
  double remainder_bound(double alpha) const { return f_max * (1.0 + alpha) * (1.0 + alpha); }
};

FeasibleWindow feasible_alpha(double lambda_i, double lambda_j, double lambda_k, double f_max);

/// Everything computed for one (modes, alpha) setting on one domain.
struct Evaluation {
  Quartet quartet;
  FMatrix f;                       // over {i, j, k}
  std::array<double, 3> lambdas{};  // lambda_i, lambda_j, lambda_k
  FeasibleWindow window;
  InteractionReport report;
};

Evaluation evaluate_configuration(const OperatorMatrix& op, const SpectralDecomposition& dec,
                                  ModeTriple modes, double alpha, double margin_floor);

/// Triples (i < j, k distinct) over the first mode_count modes. With
/// skip_degenerate, modes whose eigenvalue lies within gap_rel * |lambda_1| of
/// a neighbour are left out.
std::vector<ModeTriple> candidate_triples(const SpectralDecomposition& dec, int mode_count,
                                          bool skip_degenerate = false,
                                          double gap_rel = 1e-6);

struct SearchSpace {
  int mode_count = 5;                // used when triples is empty
  std::vector<ModeTriple> triples;   // explicit candidates, overrides mode_count
  std::vector<double> alphas;
  std::vector<double> scales;        // grid scales r; ignored by the single-domain overload
  bool skip_degenerate = false;
  double degeneracy_gap_rel = 1e-6;
  double margin_floor_rel = 1e-8;    // margin floor = margin_floor_rel * |lambda_1|
};

struct Candidate {
  ModeTriple modes;
  double alpha = 0.0;
  double scale = 0.0;
  double mes_q = 0.0;
  double margin_floor = 0.0;
  double worst_margin = 0.0;
  bool passed = false;
};

struct SearchResult {
  bool found = false;  // some candidate passed
  Candidate best;
  InteractionReport best_report;
  FeasibleWindow best_window;
  std::array<double, 3> best_lambdas{};
  double best_f_max = 0.0;
  std::size_t evaluated = 0;
  /// alpha values strictly inside a nonempty feasible window, and how many
  /// of those failed direct verification.
  std::size_t window_samples = 0;
  std::size_t window_counterexamples = 0;
  std::vector<Candidate> counterexamples;
};

/// Grid search over (triple, alpha, scale); one grid, operator and spectrum
/// per scale. The best candidate maximizes the worst margin; near-ties
/// (1e-12 relative) go to the smaller (i, j, k, alpha, scale).
SearchResult search_parameters(const Kernel& kernel, const GridSpec& base,
                               const SearchSpace& space);

/// Same search on an already assembled domain.
SearchResult search_parameters(const OperatorMatrix& op, const SpectralDecomposition& dec,
                               const SearchSpace& space);

}  // namespace lockkey
