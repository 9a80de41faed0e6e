#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "lockkey/app.hpp"
#include "lockkey/config.hpp"
#include "lockkey/construction.hpp"
#include "lockkey/errors.hpp"
#include "lockkey/grid.hpp"
#include "lockkey/kernel.hpp"
#include "lockkey/operator.hpp"
#include "lockkey/scaling.hpp"
#include "lockkey/spectral.hpp"

namespace py = pybind11;
using namespace lockkey;

namespace {

Field field_of(const OperatorMatrix& op, const Eigen::VectorXd& values) {
  if (values.size() != op.grid()->node_count()) {
    throw InputError("field has " + std::to_string(values.size()) + " values, grid has " +
                     std::to_string(op.grid()->node_count()) + " nodes");
  }
  return Field(op.grid(), values);
}

ModeTriple triple(const std::array<int, 3>& m) { return {m[0], m[1], m[2]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Electro-neutral lock/key charge distributions";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](const std::string& family, double amplitude, double width) {
             return Kernel(parse_kernel_family(family), amplitude, width);
           }),
           py::arg("family") = "gaussian", py::arg("amplitude") = 1.0, py::arg("width") = 0.5)
      .def("__call__", [](const Kernel& k, double r) { return eval_kernel(k, r); })
      .def_property_readonly("family", [](const Kernel& k) { return std::string(to_string(k.family())); })
      .def_property_readonly("amplitude", &Kernel::amplitude)
      .def_property_readonly("width", &Kernel::width);

  py::class_<DomainGrid, std::shared_ptr<DomainGrid>>(m, "Grid")
      .def_property_readonly("nodes", &DomainGrid::nodes)
      .def_property_readonly("weights", &DomainGrid::weights)
      .def_property_readonly("measure", &DomainGrid::measure)
      .def_property_readonly("dimension", &DomainGrid::dimension)
      .def_property_readonly("node_count", &DomainGrid::node_count)
      .def_property_readonly("scale", &DomainGrid::scale);

  m.def(
      "build_grid",
      [](int dimension, double box_side, int cells_per_axis, double scale, std::size_t max_nodes) {
        return std::const_pointer_cast<DomainGrid>(
            build_grid(dimension, box_side, cells_per_axis, scale, max_nodes));
      },
      py::arg("dimension") = 3, py::arg("box_side") = 1.0, py::arg("cells_per_axis") = 6,
      py::arg("scale") = 1.0, py::arg("max_nodes") = 4096);

  py::class_<OperatorMatrix>(m, "Operator")
      .def_property_readonly("entries", &OperatorMatrix::entries)
      .def_property_readonly("grid", [](const OperatorMatrix& op) {
        return std::const_pointer_cast<DomainGrid>(op.grid());
      })
      .def("apply", [](const OperatorMatrix& op, const Eigen::VectorXd& f) {
        return Eigen::VectorXd(apply_operator(op, field_of(op, f)).values());
      })
      .def("interaction", [](const OperatorMatrix& op, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g) {
        return interaction_force(op, field_of(op, f), field_of(op, g));
      })
      .def("r_one_max", &r_one_max);

  m.def(
      "assemble_operator",
      [](const std::shared_ptr<DomainGrid>& grid, const Kernel& kernel) {
        return assemble_operator(grid, kernel);
      },
      py::arg("grid"), py::arg("kernel"));

  py::class_<SpectralDecomposition>(m, "Spectrum")
      .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
      .def_readonly("eigenfields", &SpectralDecomposition::eigenfields)
      .def_readonly("max_residual", &SpectralDecomposition::max_residual)
      .def_readonly("orthonormality_error", &SpectralDecomposition::orthonormality_error)
      .def("all_negative", &SpectralDecomposition::all_negative)
      .def("interaction",
           [](const SpectralDecomposition& dec, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
             if (f.size() != dec.grid->node_count() || g.size() != dec.grid->node_count()) {
               throw InputError("field size does not match the grid");
             }
             return spectral_interaction(dec, Field(dec.grid, f), Field(dec.grid, g));
           });

  m.def("eigendecompose", &eigendecompose, py::arg("op"), py::arg("n_modes") = 0);

  m.def(
      "f_matrix",
      [](const OperatorMatrix& op, const SpectralDecomposition& dec, const std::vector<int>& modes) {
        return f_matrix(op, dec, modes).entries;
      },
      py::arg("op"), py::arg("spectrum"), py::arg("modes"));

  m.def(
      "feasible_alpha",
      [](double li, double lj, double lk, double f_max) {
        const FeasibleWindow w = feasible_alpha(li, lj, lk, f_max);
        return std::make_tuple(w.alpha_low, w.alpha_high);
      },
      py::arg("lambda_i"), py::arg("lambda_j"), py::arg("lambda_k"), py::arg("f_max"));

  m.def(
      "_evaluate",
      [](const OperatorMatrix& op, const SpectralDecomposition& dec,
         const std::array<int, 3>& modes, double alpha, double margin_floor) {
        const Evaluation e = evaluate_configuration(op, dec, triple(modes), alpha, margin_floor);
        return evaluation_json(e, *op.grid()).dump();
      },
      py::arg("op"), py::arg("spectrum"), py::arg("modes"), py::arg("alpha"),
      py::arg("margin_floor") = 0.0);

  m.def(
      "_search",
      [](const Kernel& kernel, int cells_per_axis, int mode_count,
         const std::vector<double>& alphas, const std::vector<double>& scales) {
        GridSpec base;
        base.cells_per_axis = cells_per_axis;
        SearchSpace space;
        space.mode_count = mode_count;
        space.alphas = alphas;
        space.scales = scales;
        const SearchResult r = search_parameters(kernel, base, space);
        py::dict out;
        out["found"] = r.found;
        out["modes"] = std::array<int, 3>{r.best.modes.i, r.best.modes.j, r.best.modes.k};
        out["alpha"] = r.best.alpha;
        out["scale"] = r.best.scale;
        out["worst_margin"] = r.best.worst_margin;
        out["margin_floor"] = r.best.margin_floor;
        out["evaluated"] = r.evaluated;
        out["window_samples"] = r.window_samples;
        out["window_counterexamples"] = r.window_counterexamples;
        return out;
      },
      py::arg("kernel"), py::arg("cells_per_axis"), py::arg("mode_count"), py::arg("alphas"),
      py::arg("scales"));

  m.def(
      "_scaling",
      [](const Kernel& kernel, int cells_per_axis, const std::vector<double>& scales,
         const std::vector<int>& modes) {
        GridSpec base;
        base.cells_per_axis = cells_per_axis;
        const ScalingStudy s = scaling_study(kernel, base, scales, modes);
        py::list rows;
        for (const ScalingRow& r : s.rows) {
          py::dict row;
          row["r"] = r.scale;
          row["mes_q"] = r.mes_q;
          row["f_max"] = r.f_max;
          row["r1_max"] = r.r1_max;
          row["c_ratio"] = r.c_ratio;
          row["failed"] = r.failed;
          rows.append(row);
        }
        py::dict out;
        out["rows"] = rows;
        out["slope"] = s.slope ? py::object(py::float_(*s.slope)) : py::object(py::none());
        out["c_constant"] = s.c_constant;
        return out;
      },
      py::arg("kernel"), py::arg("cells_per_axis"), py::arg("scales"), py::arg("modes"));

  m.def(
      "_run",
      [](const std::string& subcommand, const std::string& config_text,
         const std::string& out_dir, std::uint64_t seed) {
        const RunConfig config = parse_config(config_text);
        CliOptions options;
        options.out_dir = out_dir;
        options.seed = seed;
        const RunReport report = run_subcommand(subcommand, config, options);
        return std::make_tuple(report.exit_code, report.message, report.result.dump());
      },
      py::arg("subcommand"), py::arg("config_text"), py::arg("out_dir"), py::arg("seed") = 1);
}
