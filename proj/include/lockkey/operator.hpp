#pragma once

#include <Eigen/Dense>

#include "lockkey/grid.hpp"
#include "lockkey/kernel.hpp"

namespace lockkey {

/// Nystrom discretization of (R f)(x) = integral over Q of R(|x - y|) f(y) dy.
///
/// entries()(a, b) = R(|x_a - x_b|); the action applies the grid weights on
/// the right, (R f)_a = sum_b K_ab w_b f_b. The matrix is exactly symmetric.
class OperatorMatrix {
 public:
  OperatorMatrix(GridPtr grid, Kernel kernel, Eigen::MatrixXd entries);

  const GridPtr& grid() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  const Eigen::MatrixXd& entries() const { return entries_; }

  /// S = diag(sqrt w) K diag(sqrt w), similar to K diag(w).
  Eigen::MatrixXd symmetrized() const;

 private:
  GridPtr grid_;
  Kernel kernel_;
  Eigen::MatrixXd entries_;
};

OperatorMatrix assemble_operator(GridPtr grid, const Kernel& kernel);

Field apply_operator(const OperatorMatrix& op, const Field& f);

/// I<f, g> = sum_a sum_b w_a f_a K_ab w_b g_b = (R f, g).
double interaction_force(const OperatorMatrix& op, const Field& f, const Field& g);

/// R1, the operator applied to the constant-one field.
Field r_one(const OperatorMatrix& op);

/// max_a |R1_a|; on the largest member of a nested family this is C0.
double r_one_max(const OperatorMatrix& op);

}  // namespace lockkey
