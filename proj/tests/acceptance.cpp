// Acceptance run on the reference problem: one PASS/FAIL line per criterion.
//
//   acceptance --cli <path to lockkey> --work <scratch dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lockkey/app.hpp"
#include "lockkey/construction.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/rng.hpp"
#include "lockkey/scaling.hpp"
#include "lockkey/spectral.hpp"

using namespace lockkey;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

const Kernel kKernel(KernelFamily::GaussianAttractive, 1.0, 0.5);

struct Reference {
  OperatorMatrix op;
  SpectralDecomposition dec;
};

Reference reference() {
  OperatorMatrix op = assemble_operator(build_grid(GridSpec{}), kKernel);
  SpectralDecomposition dec = eigendecompose(op);
  return {std::move(op), std::move(dec)};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& command) {
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome negative_spectrum() {
  const Reference ref = reference();
  const double lambda1 = ref.dec.spectral_radius();
  const double largest = ref.dec.eigenvalues.maxCoeff();
  const bool ok = ref.dec.mode_count() == 216 && ref.dec.all_negative() &&
                  ref.dec.max_residual <= 1e-8 * lambda1 &&
                  ref.dec.orthonormality_error <= 1e-10;
  return {ok, fmt::format("{} modes, max lambda {:.3e}, residual {:.1e}, orthonormality {:.1e}",
                          ref.dec.mode_count(), largest, ref.dec.max_residual,
                          ref.dec.orthonormality_error)};
}

Outcome oracle_equivalence() {
  const Reference ref = reference();
  Lcg64 rng(1);
  double worst = 0.0;
  for (int p = 0; p < 10; ++p) {
    const Field f = random_field(ref.op.grid(), rng, 0.0, 1.0);
    const Field g = random_field(ref.op.grid(), rng, 0.0, 1.0);
    const double direct = interaction_force(ref.op, f, g);
    const double spectral = spectral_interaction(ref.dec, f, g);
    worst = std::max(worst, std::abs(direct - spectral) /
                                std::max(std::abs(direct), std::abs(spectral)));
  }
  return {worst <= 1e-8, fmt::format("max relative discrepancy {:.2e}", worst)};
}

Outcome neutrality() {
  const Reference ref = reference();
  double worst_charge = 0.0;
  double worst_idempotence = 0.0;
  for (const ModeTriple modes : {ModeTriple{1, 2, 3}, ModeTriple{2, 3, 4}, ModeTriple{5, 1, 9}}) {
    for (const double alpha : {0.05, 0.5, 0.95}) {
      const Quartet q = build_quartet(ref.dec, modes, alpha);
      for (const Field* f : q.members()) {
        const double scale = std::max(1.0, norm(*f) * std::sqrt(f->grid()->measure()));
        worst_charge = std::max(worst_charge, std::abs(total_charge(*f)) / scale);
        const Field twice = project_neutral(*f);
        worst_idempotence =
            std::max(worst_idempotence, (twice.values() - f->values()).cwiseAbs().maxCoeff() /
                                            std::max(1.0, f->values().cwiseAbs().maxCoeff()));
      }
    }
  }
  const Field constant = Field::constant(ref.op.grid(), 3.7);
  const double residue = project_neutral(constant).values().cwiseAbs().maxCoeff();
  const bool ok = worst_charge <= 1e-10 && worst_idempotence <= 1e-12 && residue <= 1e-14;
  return {ok, fmt::format("charge {:.1e}, idempotence {:.1e}, Pr(const) {:.1e}", worst_charge,
                          worst_idempotence, residue)};
}

Outcome expansion_identity() {
  const Reference ref = reference();
  const std::vector<std::pair<ModeTriple, double>> settings = {
      {{1, 2, 3}, 0.05}, {{2, 3, 4}, 0.5}, {{3, 1, 2}, 0.3},
      {{2, 5, 1}, 0.9},  {{1, 5, 7}, 0.2}, {{5, 6, 9}, 0.7}};
  double worst = 0.0;
  for (const auto& [modes, alpha] : settings) {
    const Evaluation e = evaluate_configuration(ref.op, ref.dec, modes, alpha, 0.0);
    worst = std::max(worst, e.report.max_discrepancy);
  }
  return {worst <= 1e-10,
          fmt::format("{} settings, max relative discrepancy {:.2e}", settings.size(), worst)};
}

Outcome f_scaling() {
  const double scales[] = {1.0, 0.5, 0.25, 0.125};
  const int modes[] = {1, 2, 3};
  const ScalingStudy s = scaling_study(kKernel, GridSpec{}, scales, modes);
  if (s.partial || !s.slope) return {false, "study incomplete"};
  std::vector<double> ratios;
  for (const ScalingRow& row : s.rows) ratios.push_back(row.c_ratio);
  std::sort(ratios.begin(), ratios.end());
  const double median = 0.5 * (ratios[1] + ratios[2]);
  const double spread = ratios.back() / median;
  const bool ok = *s.slope >= 0.9 && spread <= 3.0;
  return {ok, fmt::format("slope {:.4f} (need >= 0.9), max c_ratio / median {:.3f}", *s.slope,
                          spread)};
}

// Criteria 6 and 7 share one sweep.
SearchResult witness_sweep() {
  SearchSpace space;
  space.mode_count = 5;
  space.alphas = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5};
  space.scales = {0.5, 0.3, 0.2};
  return search_parameters(kKernel, GridSpec{}, space);
}

Outcome witness(const SearchResult& search, const std::string& cli, const fs::path& work) {
  if (!search.found) return {false, fmt::format("no witness in {} candidates", search.evaluated)};
  const Candidate& best = search.best;
  const fs::path config = work / "witness.cfg";
  std::ofstream(config) << fmt::format(
      "kernel.family = gaussian\nkernel.amplitude = 1\nkernel.width = 0.5\n"
      "grid.dimension = 3\ngrid.box_side = 1\ngrid.cells_per_axis = 6\ngrid.scale = {}\n"
      "modes.i = {}\nmodes.j = {}\nmodes.k = {}\nalpha.value = {}\n",
      best.scale, best.modes.i, best.modes.j, best.modes.k, best.alpha);
  const int code = run(fmt::format("{} verify --config {} --out {}", cli, config.string(),
                                   (work / "witness").string()));
  const bool ok = best.passed && best.worst_margin > best.margin_floor && code == 0;
  return {ok, fmt::format("({},{},{}) alpha {} scale {}: worst margin {:.3e} > floor {:.1e}; "
                          "verify exit {}",
                          best.modes.i, best.modes.j, best.modes.k, best.alpha, best.scale,
                          best.worst_margin, best.margin_floor, code)};
}

Outcome sufficiency(const SearchResult& search) {
  const bool ok = search.window_samples > 0 && search.window_counterexamples == 0;
  return {ok, fmt::format("{} samples inside nonempty windows, {} counterexamples",
                          search.window_samples, search.window_counterexamples)};
}

Outcome determinism(const std::string& cli, const fs::path& work, const fs::path& configs) {
  std::vector<std::string> mismatched;
  const std::pair<const char*, const char*> runs[] = {
      {"spectrum", "spectrum.csv"}, {"verify", "verify.json"}};
  for (const auto& [sub, file] : runs) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = work / fmt::format("det_{}_{}", sub, rep);
      fs::remove_all(out);
      run(fmt::format("{} {} --config {} --out {} --dump-fields {}", cli, sub,
                      (configs / "witness.cfg").string(), out.string(), (out / "fields").string()));
      std::string bytes = slurp(out / file);
      if (std::string(sub) == "verify") {
        for (const char* f : {"phi.csv", "phi_cap.csv", "psi.csv", "psi_cap.csv"}) {
          bytes += slurp(out / "fields" / f);
        }
      }
      if (bytes.empty()) return {false, fmt::format("{} produced no output", sub)};
      if (rep == 0) {
        first = std::move(bytes);
      } else if (bytes != first) {
        mismatched.push_back(sub);
      }
    }
  }
  return {mismatched.empty(), mismatched.empty() ? "spectrum and verify outputs byte-identical"
                                                 : "outputs differ between runs"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lockkey acceptance run"};
  std::string cli;
  std::string work = "acceptance_work";
  std::string configs;
  app.add_option("--cli", cli, "lockkey executable")->required();
  app.add_option("--work", work, "scratch directory");
  app.add_option("--configs", configs, "directory holding witness.cfg")->required();
  CLI11_PARSE(app, argc, argv);

  fs::remove_all(work);
  fs::create_directories(work);

  int failures = 0;
  auto report = [&failures](int id, const char* name, double limit_s,
                            const std::function<Outcome()>& check) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = check();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0.0 && seconds > limit_s) {
      out.passed = false;
      out.detail += fmt::format("; exceeded {} s", limit_s);
    }
    if (!out.passed) ++failures;
    std::cout << fmt::format("criterion {} [{}] {}: {} ({:.2f} s)\n", id,
                             out.passed ? "PASS" : "FAIL", name, out.detail, seconds)
              << std::flush;
  };

  report(1, "negative spectrum", 10.0, negative_spectrum);
  report(2, "oracle equivalence", 0.0, oracle_equivalence);
  report(3, "neutrality", 0.0, neutrality);
  report(4, "expansion identity", 0.0, expansion_identity);
  report(5, "F scaling", 60.0, f_scaling);

  SearchResult search;
  report(6, "witness existence", 120.0, [&] {
    search = witness_sweep();
    return witness(search, cli, work);
  });
  report(7, "window sufficiency", 0.0, [&] { return sufficiency(search); });
  report(8, "determinism", 0.0, [&] { return determinism(cli, work, configs); });

  std::cout << (failures == 0 ? "all criteria passed\n"
                              : fmt::format("{} of 8 criteria failed\n", failures));
  return failures == 0 ? 0 : 1;
}
