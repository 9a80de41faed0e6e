#include "lockkey/spectral.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "lockkey/errors.hpp"

namespace lockkey {

namespace {

int checked_position(int mode, int count) {
  if (mode < 1 || mode > count) {
    throw ContractError(fmt::format("mode index {} outside 1..{}", mode, count));
  }
  return mode - 1;
}

}  // namespace

double SpectralDecomposition::eigenvalue(int mode) const {
  return eigenvalues(checked_position(mode, mode_count()));
}

Field SpectralDecomposition::eigenfield(int mode) const {
  return Field(grid, eigenfields.col(checked_position(mode, mode_count())));
}

double SpectralDecomposition::spectral_radius() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

SpectralDecomposition eigendecompose(const OperatorMatrix& op, int n_modes) {
  const GridPtr& grid = op.grid();
  const Eigen::Index n = grid->node_count();
  if (n_modes > n) {
    throw ContractError(fmt::format("requested {} modes from a {}-node grid", n_modes, n));
  }
  const Eigen::Index kept = n_modes <= 0 ? n : n_modes;

  const Eigen::MatrixXd s = op.symmetrized();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    throw NumericError(fmt::format("symmetric eigensolver failed on a {}x{} operator", n, n));
  }

  Eigen::MatrixXd vectors = solver.eigenvectors().leftCols(kept);
  Eigen::VectorXd values = solver.eigenvalues().head(kept);
  for (Eigen::Index m = 0; m < kept; ++m) {
    auto v = vectors.col(m);
    const double cutoff = 1e-8 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index a = 0; a < n; ++a) {
      if (std::abs(v(a)) > cutoff) {
        if (v(a) < 0.0) v = -v;
        break;
      }
    }
  }

  SpectralDecomposition dec;
  dec.grid = grid;
  dec.eigenvalues = values;
  // Residual of R e - lambda e in the weighted norm equals ||S v - lambda v||.
  const Eigen::MatrixXd residual = s * vectors - vectors * values.asDiagonal();
  dec.max_residual = residual.colwise().norm().maxCoeff();
  dec.orthonormality_error =
      (vectors.transpose() * vectors - Eigen::MatrixXd::Identity(kept, kept))
          .cwiseAbs()
          .maxCoeff();
  dec.eigenfields = grid->weights().cwiseSqrt().cwiseInverse().asDiagonal() * vectors;

  if (!std::isfinite(dec.max_residual) || !values.allFinite()) {
    throw NumericError(fmt::format("eigensolver produced non-finite output (residual {})",
                                   dec.max_residual));
  }
  return dec;
}

Field project_neutral(const Field& f) {
  Eigen::VectorXd values = f.values().array() - mean_value(f);
  return Field(f.grid(), std::move(values));
}

bool is_neutral(const Field& f, double tol) {
  const double scale = std::max(1.0, norm(f) * std::sqrt(f.grid()->measure()));
  return std::abs(total_charge(f)) <= tol * scale;
}

double spectral_interaction(const SpectralDecomposition& dec, const Field& f,
                            const Field& g) {
  if (!same_grid(dec.grid, f.grid()) || !same_grid(dec.grid, g.grid())) {
    throw ContractError("fields and decomposition live on different grids");
  }
  const Eigen::VectorXd& w = dec.grid->weights();
  const Eigen::VectorXd cf = dec.eigenfields.transpose() * w.cwiseProduct(f.values());
  const Eigen::VectorXd cg = dec.eigenfields.transpose() * w.cwiseProduct(g.values());
  return (dec.eigenvalues.array() * cf.array() * cg.array()).sum();
}

double FMatrix::at(int mode_i, int mode_j) const {
  auto position = [this](int mode) {
    for (std::size_t p = 0; p < modes.size(); ++p) {
      if (modes[p] == mode) return static_cast<Eigen::Index>(p);
    }
    throw ContractError(fmt::format("mode {} not covered by this F-matrix", mode));
  };
  return entries(position(mode_i), position(mode_j));
}

FMatrix f_matrix(const OperatorMatrix& op, const SpectralDecomposition& dec,
                 std::span<const int> modes) {
  if (!same_grid(op.grid(), dec.grid)) {
    throw ContractError("operator and decomposition live on different grids");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(modes.size());
  const Eigen::VectorXd& w = op.grid()->weights();
  Eigen::MatrixXd weighted_projected(w.size(), m);
  Eigen::VectorXd lambdas(m);
  for (Eigen::Index p = 0; p < m; ++p) {
    const int mode = modes[static_cast<std::size_t>(p)];
    lambdas(p) = dec.eigenvalue(mode);
    weighted_projected.col(p) =
        w.cwiseProduct(project_neutral(dec.eigenfield(mode)).values());
  }
  // (R Pr e_i, Pr e_j) = (W Pr e_j)^T K (W Pr e_i).
  Eigen::MatrixXd projected = weighted_projected.transpose() * op.entries() * weighted_projected;
  projected.diagonal() -= lambdas;

  FMatrix result;
  result.modes.assign(modes.begin(), modes.end());
  result.entries = std::move(projected);
  result.mes_q = op.grid()->measure();
  return result;
}

SchwartzBounds schwartz_bounds(const SpectralDecomposition& dec, const OperatorMatrix& op) {
  if (!same_grid(op.grid(), dec.grid)) {
    throw ContractError("operator and decomposition live on different grids");
  }
  const double mes_q = op.grid()->measure();
  const Field r1 = r_one(op);
  const Eigen::VectorXd& w = op.grid()->weights();

  SchwartzBounds bounds;
  bounds.avg_bound = std::sqrt(mes_q);
  bounds.r1_bound = norm(r1);
  bounds.c0 = r1.values().cwiseAbs().maxCoeff();
  bounds.rhs_bound = dec.spectral_radius() + 2.0 * bounds.r1_bound / bounds.avg_bound;
  bounds.c_constant = bounds.rhs_bound / mes_q;
  if (dec.mode_count() > 0) {
    bounds.max_total_charge = (dec.eigenfields.transpose() * w).cwiseAbs().maxCoeff();
    bounds.max_r1_projection =
        (dec.eigenfields.transpose() * w.cwiseProduct(r1.values())).cwiseAbs().maxCoeff();
  }
  return bounds;
}

}  // namespace lockkey
