#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "lockkey/construction.hpp"
#include "lockkey/errors.hpp"
#include "oracles.hpp"

using namespace lockkey;

namespace {

const Kernel kReference(KernelFamily::GaussianAttractive, 1.0, 0.5);

struct Domain {
  explicit Domain(double scale)
      : op(assemble_operator(build_grid(3, 1.0, 6, scale), kReference)), dec(eigendecompose(op)) {}
  OperatorMatrix op;
  SpectralDecomposition dec;
  double floor() const { return 1e-8 * dec.spectral_radius(); }
};

const Domain& domain(double scale) {
  static const Domain d1(1.0), d05(0.5), d03(0.3), d02(0.2);
  if (scale == 1.0) return d1;
  if (scale == 0.5) return d05;
  if (scale == 0.3) return d03;
  return d02;
}

double max_abs_diff(const Field& a, const Field& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

Eigen::Matrix4d pattern_matrix() {
  // Key pairs +1, everything else -1.
  Eigen::Matrix4d m = -Eigen::Matrix4d::Ones();
  m(0, 1) = m(1, 0) = 1.0;
  m(2, 3) = m(3, 2) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("mode triples must be distinct") {
  CHECK_NOTHROW(ModeTriple{1, 2, 3}.validate());
  CHECK_THROWS_AS((ModeTriple{1, 1, 3}.validate()), ContractError);
  CHECK_THROWS_AS((ModeTriple{1, 3, 3}.validate()), ContractError);
  CHECK_THROWS_AS((ModeTriple{0, 2, 3}.validate()), ContractError);
}

TEST_CASE("quartet construction") {
  const auto& dec = domain(1.0).dec;
  const Field pi = project_neutral(dec.eigenfield(2));
  const Field pk = project_neutral(dec.eigenfield(5));

  SUBCASE("alpha zero is a diagnostic only") {
    CHECK_THROWS_AS(build_quartet(dec, {2, 3, 5}, 0.0), InputError);
    CHECK_THROWS_AS(build_quartet(dec, {2, 3, 5}, -0.1), InputError);
    const Quartet q = build_quartet(dec, {2, 3, 5}, 0.0, AlphaPolicy::AllowZero);
    CHECK(max_abs_diff(q.phi, pi) == 0.0);
    CHECK(max_abs_diff(q.phi_cap, -pi) == 0.0);
  }
  SUBCASE("repeated indices") {
    CHECK_THROWS_AS(build_quartet(dec, {2, 2, 5}, 0.3), ContractError);
  }
  SUBCASE("table algebra and neutrality") {
    const Quartet q = build_quartet(dec, {2, 3, 5}, 0.37);
    CHECK(max_abs_diff(q.phi - q.phi_cap, 2.0 * pi) <= 1e-14);
    CHECK(max_abs_diff(q.phi + q.phi_cap, 2.0 * 0.37 * pk) <= 1e-14);
    CHECK(max_abs_diff(q.psi + q.psi_cap, 2.0 * 0.37 * pk) <= 1e-14);
    for (const Field* f : q.members()) {
      CHECK(is_neutral(*f, 1e-10));
      CHECK(std::abs(total_charge(*f)) <= 1e-10 * norm(*f) * std::sqrt(f->grid()->measure()));
    }
  }
}

TEST_CASE("direct interactions agree with the lambda/F expansion") {
  struct Setting {
    double scale;
    ModeTriple modes;
    double alpha;
  };
  const Setting settings[] = {
      {1.0, {1, 2, 3}, 0.05}, {1.0, {2, 3, 4}, 0.5}, {1.0, {2, 5, 1}, 0.3},
      {0.5, {1, 5, 7}, 0.8},  {0.3, {3, 4, 2}, 0.25}, {0.2, {5, 6, 9}, 0.45},
  };
  for (const Setting& s : settings) {
    const auto& [op, dec] = domain(s.scale);
    const Quartet q = build_quartet(dec, s.modes, s.alpha);
    const InteractionReport report = quartet_interactions(op, dec, q, 0.0);
    CHECK(report.max_discrepancy <= 1e-10);
    CHECK(report.max_asymmetry <= 1e-12);
    for (const PairValue& p : report.pairs) {
      CHECK(p.margin == (p.attract ? p.direct : -p.direct));
    }
  }
}

TEST_CASE("alpha zero collapses the cross interaction onto F_ij") {
  const auto& [op, dec] = domain(1.0);
  const Quartet q = build_quartet(dec, {1, 5, 2}, 0.0, AlphaPolicy::AllowZero);
  const InteractionReport report = quartet_interactions(op, dec, q, 0.0);
  const int modes[] = {1, 5, 2};
  const FMatrix f = f_matrix(op, dec, modes);
  CHECK(report.pairs[2].name == "phi_psi");
  CHECK(std::abs(report.pairs[2].direct - f.at(1, 5)) <= 1e-14);
}

TEST_CASE("sign pattern verification") {
  Eigen::Matrix4d m = pattern_matrix();
  Verdict v = verify_complementarity(m, 0.0);
  CHECK(v.passed);
  CHECK(v.worst_margin == 1.0);
  CHECK(v.failing_pairs.empty());

  m(0, 2) = m(2, 0) = 1.0;  // phi attracts psi
  v = verify_complementarity(m, 0.0);
  CHECK_FALSE(v.passed);
  CHECK(v.worst_pair == "phi_psi");
  CHECK(v.worst_margin == -1.0);
  REQUIRE(v.failing_pairs.size() == 1);
  CHECK(v.failing_pairs[0] == "phi_psi");

  // Margins must clear the floor, not just have the right sign.
  CHECK_FALSE(verify_complementarity(pattern_matrix(), 1.0).passed);
  CHECK(verify_complementarity(pattern_matrix(), 0.999).passed);
}

TEST_CASE("feasible window") {
  SUBCASE("remainder-free limit") {
    const FeasibleWindow w = feasible_alpha(-1.0, -1.0, -0.5, 0.0);
    CHECK(w.alpha_low == 0.0);
    CHECK(w.alpha_high == 1.0);
  }
  SUBCASE("large remainders leave nothing") {
    CHECK(feasible_alpha(-1.0, -1.0, -0.5, 0.5).empty());
    CHECK(feasible_alpha(-1.0, -1.0, -0.5, 0.2).empty());
  }
  SUBCASE("endpoints against bisection on the defining inequalities") {
    const double li = -1.0, lj = -0.8, lk = -0.6;
    for (double f : {1e-4, 1e-3, 5e-3, 2e-2}) {
      const FeasibleWindow w = feasible_alpha(li, lj, lk, f);
      REQUIRE_FALSE(w.empty());
      auto cross = [&](double a) { return a * a * 0.6 - f * (1 + a) * (1 + a); };
      auto key = [&](double a) { return 0.8 - a * a * 0.6 - f * (1 + a) * (1 + a); };
      CHECK(w.alpha_low == doctest::Approx(oracles::bisect(cross, 0.0, 1.0)).epsilon(1e-12));
      CHECK(w.alpha_high == doctest::Approx(std::min(1.0, oracles::bisect(key, 0.0, 2.0))).epsilon(1e-12));
      // Dense sampling: both inequalities hold exactly inside.
      for (int s = 1; s < 1000; ++s) {
        const double a = s / 1000.0;
        CHECK(w.contains(a) == (cross(a) > 0 && key(a) > 0 && a < 1.0));
      }
      CHECK(w.remainder_bound(0.5) == doctest::Approx(f * 2.25));
    }
  }
  SUBCASE("non-negative eigenvalues are rejected") {
    CHECK_THROWS_AS(feasible_alpha(-1.0, 0.0, -0.5, 0.0), ContractError);
    CHECK_THROWS_AS(feasible_alpha(-1.0, -1.0, -0.5, -1.0), ContractError);
  }
  SUBCASE("reference domain of side 0.3") {
    const auto& [op, dec] = domain(0.3);
    // The odd triple is nearly neutral already: F ~ rounding, window ~ (0, 1).
    // Equal eigenvalues put the upper end at (|lambda| - f) / (|lambda| + f).
    const Evaluation odd = evaluate_configuration(op, dec, {2, 3, 4}, 0.5, 0.0);
    CHECK_FALSE(odd.window.empty());
    CHECK(odd.window.alpha_low < 1e-4);
    const double lam = std::abs(odd.lambdas[2]);
    const double f = odd.window.f_max;
    CHECK(odd.window.alpha_high == doctest::Approx((lam - f) / (lam + f)).epsilon(1e-9));
    CHECK(odd.window.alpha_high > 1.0 - 1e-6);
    // Mode 1 is close to constant, Pr nearly kills it, F_11 ~ -lambda_1
    // swamps every other term and the sufficient conditions fail.
    const Evaluation leading = evaluate_configuration(op, dec, {1, 2, 3}, 0.5, 0.0);
    CHECK(leading.window.empty());
    CHECK(leading.f.max_abs() == doctest::Approx(std::abs(dec.eigenvalue(1))).epsilon(1e-3));
  }
}

TEST_CASE("alpha inside a nonempty window always passes direct verification") {
  std::size_t samples = 0;
  for (double scale : {1.0, 0.5, 0.3, 0.2}) {
    const auto& [op, dec] = domain(scale);
    for (const ModeTriple& t : candidate_triples(dec, 7)) {
      const std::array<int, 3> idx = {t.i, t.j, t.k};
      const FMatrix f = f_matrix(op, dec, idx);
      const FeasibleWindow w = feasible_alpha(dec.eigenvalue(t.i), dec.eigenvalue(t.j),
                                              dec.eigenvalue(t.k), f.max_abs());
      if (w.empty()) continue;
      for (int s = 1; s < 10; ++s) {
        const double alpha = w.alpha_low + (w.alpha_high - w.alpha_low) * s / 10.0;
        const InteractionReport r =
            quartet_interactions(op, dec, build_quartet(dec, t, alpha), 0.0);
        CHECK(r.verdict.passed);
        ++samples;
      }
    }
  }
  CHECK(samples > 0);
}

TEST_CASE("flipping eigenfield signs permutes but preserves the margins") {
  const auto& [op, dec] = domain(1.0);
  for (const ModeTriple t : {ModeTriple{2, 3, 4}, ModeTriple{1, 2, 3}, ModeTriple{2, 5, 1}}) {
    const double alpha = 0.3;
    const InteractionReport base = quartet_interactions(op, dec, build_quartet(dec, t, alpha), 0.0);
    auto sorted_margins = [](const InteractionReport& r) {
      std::vector<double> m;
      for (const PairValue& p : r.pairs) m.push_back(p.margin);
      std::sort(m.begin(), m.end());
      return m;
    };
    const auto expected = sorted_margins(base);
    for (int mode : {t.i, t.j, t.k}) {
      SpectralDecomposition flipped = dec;
      flipped.eigenfields.col(mode - 1) *= -1.0;
      const InteractionReport r =
          quartet_interactions(op, flipped, build_quartet(flipped, t, alpha), 0.0);
      CHECK(r.verdict.passed == base.verdict.passed);
      const auto got = sorted_margins(r);
      for (std::size_t p = 0; p < got.size(); ++p) {
        CHECK(got[p] == doctest::Approx(expected[p]).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("leading triple passes only for small alpha at unit scale") {
  const auto& [op, dec] = domain(1.0);
  const Evaluation small = evaluate_configuration(op, dec, {1, 2, 3}, 0.05, domain(1.0).floor());
  CHECK(small.report.verdict.passed);
  const Evaluation big = evaluate_configuration(op, dec, {1, 2, 3}, 0.5, domain(1.0).floor());
  CHECK_FALSE(big.report.verdict.passed);
  CHECK(big.report.verdict.worst_pair == "phi_Phi");
}

TEST_CASE("candidate triples") {
  const auto& dec = domain(1.0).dec;
  const auto all = candidate_triples(dec, 5);
  CHECK(all.size() == 30);  // C(5,2) pairs times 3 choices of k
  for (const ModeTriple& t : all) {
    CHECK(t.i < t.j);
    CHECK_NOTHROW(t.validate());
  }
  // On the cube every mode after the first sits in a degenerate cluster.
  CHECK(candidate_triples(dec, 5, true).empty());
}

TEST_CASE("parameter search") {
  SearchSpace space;
  space.alphas = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  space.scales = {0.5};
  space.mode_count = 5;

  SUBCASE("finds a witness and prefers the larger worst margin") {
    const SearchResult r = search_parameters(kReference, GridSpec{}, space);
    CHECK(r.found);
    CHECK(r.best.passed);
    CHECK(r.best.modes == ModeTriple{2, 3, 4});
    CHECK(r.best.alpha == 0.5);
    CHECK(r.evaluated == 300);
    CHECK(r.window_counterexamples == 0);
    CHECK(r.best_report.verdict.worst_margin ==
          doctest::Approx(0.25 * std::abs(r.best_lambdas[0])).epsilon(1e-8));
  }
  SUBCASE("near-ties go to the lexicographically smaller setting") {
    const auto& [op, dec] = domain(0.5);
    space.triples = {{3, 4, 2}, {2, 4, 3}, {2, 3, 4}};
    space.alphas = {0.5};
    const SearchResult r = search_parameters(op, dec, space);
    CHECK(r.best.modes == ModeTriple{2, 3, 4});
  }
  SUBCASE("larger margin wins over lexicographic order") {
    const auto& [op, dec] = domain(0.5);
    space.triples = {{2, 3, 4}};
    space.alphas = {0.3, 0.5};
    CHECK(search_parameters(op, dec, space).best.alpha == 0.5);
  }
  SUBCASE("no witness is a result, not an error") {
    const auto& [op, dec] = domain(0.5);
    space.triples = {{1, 2, 3}};
    space.alphas = {0.9};
    const SearchResult r = search_parameters(op, dec, space);
    CHECK_FALSE(r.found);
    CHECK(r.best.worst_margin < 0.0);
  }
  SUBCASE("input errors") {
    space.alphas.clear();
    CHECK_THROWS_AS(search_parameters(kReference, GridSpec{}, space), InputError);
    space.alphas = {1.5};
    CHECK_THROWS_AS(search_parameters(kReference, GridSpec{}, space), InputError);
    space.alphas = {0.5};
    space.scales.clear();
    CHECK_THROWS_AS(search_parameters(kReference, GridSpec{}, space), InputError);
  }
}
