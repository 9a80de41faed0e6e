#include "lockkey/app.hpp"

#include <chrono>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "lockkey/errors.hpp"
#include "lockkey/io.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/rng.hpp"
#include "lockkey/scaling.hpp"
#include "lockkey/spectral.hpp"

namespace lockkey {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Stopwatch {
 public:
  explicit Stopwatch(RunReport& report) : report_(report) {}

  void lap(std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    report_.timings.emplace_back(std::move(stage),
                                 std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  RunReport& report_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

class Runner {
 public:
  Runner(const RunConfig& config, const CliOptions& options, RunReport& report)
      : config_(config),
        options_(options),
        report_(report),
        clock_(report),
        out_dir_(options.out_dir ? *options.out_dir : config.output_directory) {}

  void spectrum() {
    const auto [op, dec] = assemble();
    write_csv("spectrum.csv", spectrum_csv(dec));
    json result = {
        {"mode_count", dec.mode_count()},
        {"all_negative", dec.all_negative()},
        {"lambda_1", dec.eigenvalue(1)},
        {"max_residual", dec.max_residual},
        {"orthonormality_error", dec.orthonormality_error},
        {"residual_ok", dec.max_residual <= config_.eigen_residual * dec.spectral_radius()},
    };
    finish(result, dec.all_negative() ? kExitOk : kExitNegative);
  }

  void verify() {
    const auto [op, dec] = assemble();
    const double floor = config_.margin_floor * dec.spectral_radius();
    double alpha;
    if (config_.alpha) {
      alpha = *config_.alpha;
    } else {
      SearchSpace space;
      space.triples = {config_.modes};
      space.alphas = config_.alpha_grid;
      space.margin_floor_rel = config_.margin_floor;
      alpha = search_parameters(op, dec, space).best.alpha;
      clock_.lap("alpha_search");
    }
    const Evaluation eval = evaluate_configuration(op, dec, config_.modes, alpha, floor);
    clock_.lap("verify");
    dump_fields(eval.quartet);
    json result = evaluation_json(eval, *op.grid());
    result["config"] = config_json(config_);
    write_json("verify.json", result);
    finish(result, eval.report.verdict.passed ? kExitOk : kExitNegative);
  }

  void construct() {
    SearchSpace space;
    if (config_.search_count > 0) {
      space.mode_count = config_.search_count;
    } else {
      space.triples = {config_.modes};
    }
    space.alphas = config_.alpha ? std::vector<double>{*config_.alpha} : config_.alpha_grid;
    space.scales =
        config_.search_scales.empty() ? std::vector<double>{config_.grid.scale} : config_.search_scales;
    space.skip_degenerate = config_.skip_degenerate;
    space.margin_floor_rel = config_.margin_floor;
    const SearchResult search = search_parameters(config_.kernel(), config_.grid, space);
    clock_.lap("search");

    // Rebuild the winning configuration so the report and field dumps come
    // from one evaluation.
    GridSpec spec = config_.grid;
    spec.scale = search.best.scale;
    const OperatorMatrix op = assemble_operator(build_grid(spec), config_.kernel());
    const SpectralDecomposition dec = eigendecompose(op);
    const Evaluation eval = evaluate_configuration(op, dec, search.best.modes,
                                                   search.best.alpha, search.best.margin_floor);
    clock_.lap("witness");
    if (options_.dump_operator) {
      write_operator(op);
    }
    dump_fields(eval.quartet);

    json result = evaluation_json(eval, *op.grid());
    result["config"] = config_json(config_);
    result["search"] = {
        {"found", search.found},
        {"evaluated", search.evaluated},
        {"window_samples", search.window_samples},
        {"window_counterexamples", search.window_counterexamples},
    };
    write_json("construct.json", result);
    finish(result, search.found ? kExitOk : kExitNegative,
           search.found ? "" : "no witness found");
  }

  void scan_size() {
    const std::array<int, 3> modes = {config_.modes.i, config_.modes.j, config_.modes.k};
    const ScalingStudy study =
        scaling_study(config_.kernel(), config_.grid, config_.scan_scales, modes);
    clock_.lap("scaling_study");
    write_csv("scaling.csv", scaling_csv(study));
    json summary = {
        {"slope", study.slope ? json(*study.slope) : json(nullptr)},
        {"c_constant", study.c_constant},
        {"r0", study.r0},
        {"partial", study.partial},
        {"modes", {modes[0], modes[1], modes[2]}},
    };
    write_json("scaling_summary.json", summary);
    finish(summary, study.partial ? kExitNumeric : kExitOk,
           study.partial ? "some scales failed; see scaling.csv" : "");
  }

  void scan_alpha() {
    const auto [op, dec] = assemble();
    const double floor = config_.margin_floor * dec.spectral_radius();
    std::string csv = "alpha,worst_margin,verdict,in_window\n";
    FeasibleWindow window;
    bool any_pass = false;
    for (double alpha : config_.alpha_grid) {
      const Evaluation eval = evaluate_configuration(op, dec, config_.modes, alpha, floor);
      window = eval.window;
      any_pass = any_pass || eval.report.verdict.passed;
      csv += fmt::format("{},{},{},{}\n", format_double(alpha),
                         format_double(eval.report.verdict.worst_margin),
                         eval.report.verdict.passed ? 1 : 0, window.contains(alpha) ? 1 : 0);
    }
    clock_.lap("scan_alpha");
    write_csv("alpha_scan.csv", csv);
    json result = {
        {"window", window_json(window)},
        {"margin_floor", floor},
        {"any_pass", any_pass},
    };
    write_json("alpha_scan.json", result);
    finish(result, any_pass ? kExitOk : kExitNegative);
  }

  void oracle_check() {
    const auto [op, dec] = assemble();
    Lcg64 rng(options_.seed);
    double worst = 0.0;
    json pairs = json::array();
    for (int p = 0; p < 10; ++p) {
      const Field f = random_field(op.grid(), rng, 0.0, 1.0);
      const Field g = random_field(op.grid(), rng, 0.0, 1.0);
      const double direct = interaction_force(op, f, g);
      const double spectral = spectral_interaction(dec, f, g);
      const double scale = std::max(std::abs(direct), std::abs(spectral));
      const double rel = scale > 0.0 ? std::abs(direct - spectral) / scale : 0.0;
      worst = std::max(worst, rel);
      pairs.push_back({{"direct", direct}, {"spectral", spectral}, {"relative", rel}});
    }
    clock_.lap("oracle_check");
    json result = {
        {"seed", options_.seed},
        {"pairs", pairs},
        {"max_relative_discrepancy", worst},
        {"tolerance", config_.oracle},
        {"passed", worst <= config_.oracle},
    };
    write_json("oracle_check.json", result);
    finish(result, worst <= config_.oracle ? kExitOk : kExitNegative);
  }

 private:
  std::pair<OperatorMatrix, SpectralDecomposition> assemble() {
    OperatorMatrix op = assemble_operator(build_grid(config_.grid), config_.kernel());
    clock_.lap("assemble");
    if (options_.dump_operator) {
      write_operator(op);
    }
    SpectralDecomposition dec = eigendecompose(op);
    clock_.lap("eigendecompose");
    return {std::move(op), std::move(dec)};
  }

  void write_operator(const OperatorMatrix& op) {
    const std::string csv = operator_csv(op);
    write_file_atomic(*options_.dump_operator, csv);
    report_.artifacts.push_back({*options_.dump_operator, csv_rows(csv)});
  }

  void dump_fields(const Quartet& quartet) {
    if (!options_.dump_fields) return;
    static constexpr std::array<std::string_view, 4> files = {"phi.csv", "phi_cap.csv",
                                                              "psi.csv", "psi_cap.csv"};
    const auto members = quartet.members();
    for (std::size_t m = 0; m < files.size(); ++m) {
      const std::string csv = field_csv(*members[m]);
      const fs::path path = *options_.dump_fields / files[m];
      write_file_atomic(path, csv);
      report_.artifacts.push_back({path, csv_rows(csv)});
    }
  }

  void write_csv(std::string_view name, const std::string& csv) {
    const fs::path path = out_dir_ / name;
    write_file_atomic(path, csv);
    report_.artifacts.push_back({path, csv_rows(csv)});
  }

  void write_json(std::string_view name, const json& value) {
    const fs::path path = out_dir_ / name;
    write_file_atomic(path, value.dump(2) + "\n");
    report_.artifacts.push_back({path, 0});
  }

  void finish(json result, int exit_code, std::string message = {}) {
    report_.result = std::move(result);
    report_.exit_code = exit_code;
    report_.message = std::move(message);
  }

  static json window_json(const FeasibleWindow& w) {
    return {{"low", w.alpha_low}, {"high", w.alpha_high}, {"empty", w.empty()}};
  }

  const RunConfig& config_;
  const CliOptions& options_;
  RunReport& report_;
  Stopwatch clock_;
  fs::path out_dir_;
};

}  // namespace

Field random_field(const GridPtr& grid, Lcg64& rng, double low, double high) {
  Eigen::VectorXd values(grid->node_count());
  for (Eigen::Index a = 0; a < values.size(); ++a) {
    values(a) = rng.uniform(low, high);
  }
  return Field(grid, std::move(values));
}

json config_json(const RunConfig& c) {
  json alpha = c.alpha ? json(*c.alpha) : json(nullptr);
  return {
      {"kernel",
       {{"family", to_string(c.kernel_family)},
        {"amplitude", c.kernel_amplitude},
        {"width", c.kernel_width}}},
      {"grid",
       {{"dimension", c.grid.dimension},
        {"box_side", c.grid.box_side},
        {"cells_per_axis", c.grid.cells_per_axis},
        {"scale", c.grid.scale},
        {"max_nodes", c.grid.max_nodes}}},
      {"modes",
       {{"i", c.modes.i},
        {"j", c.modes.j},
        {"k", c.modes.k},
        {"search_count", c.search_count},
        {"skip_degenerate", c.skip_degenerate}}},
      {"alpha", {{"value", alpha}, {"grid", c.alpha_grid}}},
      {"scan", {{"scales", c.scan_scales}, {"search_scales", c.search_scales}}},
      {"output", {{"directory", c.output_directory.string()}}},
      {"tolerances",
       {{"eigen_residual", c.eigen_residual},
        {"neutrality", c.neutrality},
        {"margin_floor", c.margin_floor},
        {"oracle", c.oracle}}},
  };
}

json evaluation_json(const Evaluation& eval, const DomainGrid& grid) {
  const InteractionReport& report = eval.report;
  json interactions = json::object();
  json margins = json::object();
  json expanded = json::object();
  for (const PairValue& pair : report.pairs) {
    interactions[std::string(pair.name)] = pair.direct;
    margins[std::string(pair.name)] = pair.margin;
    expanded[std::string(pair.name)] = pair.expanded;
  }
  const ModeTriple& m = eval.quartet.modes;
  return {
      {"i", m.i},
      {"j", m.j},
      {"k", m.k},
      {"alpha", eval.quartet.alpha},
      {"scale", grid.scale()},
      {"mes_q", grid.measure()},
      {"lambda", {{"i", eval.lambdas[0]}, {"j", eval.lambdas[1]}, {"k", eval.lambdas[2]}}},
      {"f_max", eval.f.max_abs()},
      {"window",
       {{"low", eval.window.alpha_low},
        {"high", eval.window.alpha_high},
        {"empty", eval.window.empty()}}},
      {"interactions", interactions},
      {"expanded", expanded},
      {"margins", margins},
      {"margin_floor", report.margin_floor},
      {"max_discrepancy", report.max_discrepancy},
      {"verdict", report.verdict.passed},
      {"worst_margin", report.verdict.worst_margin},
      {"worst_pair", report.verdict.worst_pair},
      {"failing_pairs", report.verdict.failing_pairs},
  };
}

json RunReport::to_json(const RunConfig& config) const {
  json artifact_list = json::array();
  for (const Artifact& a : artifacts) {
    artifact_list.push_back({{"path", a.path.string()}, {"rows", a.rows}});
  }
  json timing = json::object();
  for (const auto& [stage, seconds] : timings) {
    timing[stage] = seconds;
  }
  return {
      {"config", config_json(config)}, {"exit_code", exit_code}, {"message", message},
      {"result", result},              {"artifacts", artifact_list}, {"timings", timing},
  };
}

RunReport run_subcommand(std::string_view name, const RunConfig& config,
                         const CliOptions& options) {
  RunReport report;
  try {
    Runner runner(config, options, report);
    if (name == "spectrum") {
      runner.spectrum();
    } else if (name == "construct") {
      runner.construct();
    } else if (name == "verify") {
      runner.verify();
    } else if (name == "scan-size") {
      runner.scan_size();
    } else if (name == "scan-alpha") {
      runner.scan_alpha();
    } else if (name == "oracle-check") {
      runner.oracle_check();
    } else {
      report.exit_code = kExitUsage;
      report.message = fmt::format("unknown subcommand '{}'", name);
    }
  } catch (const NumericError& e) {
    report.exit_code = kExitNumeric;
    report.message = e.what();
  } catch (const ResourceError& e) {
    report.exit_code = kExitUsage;
    report.message = e.what();
  } catch (const InputError& e) {
    report.exit_code = kExitUsage;
    report.message = e.what();
  } catch (const ContractError& e) {
    report.exit_code = kExitUsage;
    report.message = e.what();
  } catch (const fs::filesystem_error& e) {
    report.exit_code = kExitUsage;
    report.message = e.what();
  } catch (const std::exception& e) {
    report.exit_code = kExitNumeric;
    report.message = e.what();
  }
  return report;
}

}  // namespace lockkey
