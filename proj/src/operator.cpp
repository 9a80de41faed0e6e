#include "lockkey/operator.hpp"

#include <cmath>

#include "lockkey/errors.hpp"

namespace lockkey {

OperatorMatrix::OperatorMatrix(GridPtr grid, Kernel kernel, Eigen::MatrixXd entries)
    : grid_(std::move(grid)), kernel_(kernel), entries_(std::move(entries)) {
  if (!grid_ || entries_.rows() != grid_->node_count() ||
      entries_.cols() != grid_->node_count()) {
    throw ContractError("operator entries do not match the grid");
  }
}

Eigen::MatrixXd OperatorMatrix::symmetrized() const {
  const Eigen::VectorXd root = grid_->weights().cwiseSqrt();
  return root.asDiagonal() * entries_ * root.asDiagonal();
}

OperatorMatrix assemble_operator(GridPtr grid, const Kernel& kernel) {
  if (!grid) {
    throw ContractError("operator needs a grid");
  }
  const Eigen::Index n = grid->node_count();
  const Eigen::MatrixXd& x = grid->nodes();
  Eigen::MatrixXd entries(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    entries(a, a) = kernel(0.0);
    for (Eigen::Index b = 0; b < a; ++b) {
      const double value = kernel((x.row(a) - x.row(b)).norm());
      entries(a, b) = value;
      entries(b, a) = value;
    }
  }
  return OperatorMatrix(std::move(grid), kernel, std::move(entries));
}

Field apply_operator(const OperatorMatrix& op, const Field& f) {
  if (!same_grid(op.grid(), f.grid())) {
    throw ContractError("field and operator live on different grids");
  }
  Eigen::VectorXd weighted = op.grid()->weights().cwiseProduct(f.values());
  return Field(op.grid(), op.entries() * weighted);
}

double interaction_force(const OperatorMatrix& op, const Field& f, const Field& g) {
  if (!same_grid(op.grid(), f.grid()) || !same_grid(op.grid(), g.grid())) {
    throw ContractError("fields and operator live on different grids");
  }
  const Eigen::VectorXd& w = op.grid()->weights();
  const Eigen::VectorXd wf = w.cwiseProduct(f.values());
  const Eigen::VectorXd wg = w.cwiseProduct(g.values());
  // Explicit double sum; kept independent of the eigensolver path.
  const Eigen::MatrixXd& k = op.entries();
  const Eigen::Index n = w.size();
  double total = 0.0;
  for (Eigen::Index b = 0; b < n; ++b) {
    double column = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      column += wf(a) * k(a, b);
    }
    total += column * wg(b);
  }
  return total;
}

Field r_one(const OperatorMatrix& op) {
  return apply_operator(op, Field::constant(op.grid(), 1.0));
}

double r_one_max(const OperatorMatrix& op) {
  return r_one(op).values().cwiseAbs().maxCoeff();
}

}  // namespace lockkey
