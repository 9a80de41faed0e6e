#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>

namespace lockkey {

inline constexpr std::size_t kDefaultMaxNodes = 4096;

/// Parameters of a uniform cell-centred box grid.
struct GridSpec {
  int dimension = 3;
  double box_side = 1.0;
  int cells_per_axis = 6;
  double scale = 1.0;
  std::size_t max_nodes = kDefaultMaxNodes;
};

/// Midpoint-rule discretization of Q = [0, box_side * scale]^dimension.
///
/// Nodes are cell centres (one row per node), weights are cell volumes.
/// The grid is immutable; fields hold it through a shared pointer.
class DomainGrid {
 public:
  DomainGrid(int dimension, double box_side, int cells_per_axis, double scale,
             Eigen::MatrixXd nodes, Eigen::VectorXd weights);

  int dimension() const { return dimension_; }
  /// Side of the scale-1 member of the family.
  double box_side() const { return box_side_; }
  int cells_per_axis() const { return cells_per_axis_; }
  /// r of the nested family Q(r); the box has side box_side() * scale().
  double scale() const { return scale_; }
  /// mes Q, the sum of the weights.
  double measure() const { return measure_; }

  Eigen::Index node_count() const { return weights_.size(); }
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  /// Same node coordinates and weights.
  bool same_layout(const DomainGrid& other) const;

 private:
  int dimension_;
  double box_side_;
  int cells_per_axis_;
  double scale_;
  double measure_;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const DomainGrid>;

GridPtr build_grid(int dimension, double box_side, int cells_per_axis,
                   double scale, std::size_t max_nodes = kDefaultMaxNodes);
GridPtr build_grid(const GridSpec& spec);

/// Member Q(r) of the nested family: coordinates scaled by r / g.scale()
/// about the box corner, node count unchanged.
GridPtr scale_domain(const DomainGrid& grid, double r);

/// A charge distribution: one value per node of a grid.
class Field {
 public:
  Field(GridPtr grid, Eigen::VectorXd values);

  static Field constant(GridPtr grid, double value);
  static Field zero(GridPtr grid) { return constant(std::move(grid), 0.0); }

  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double factor);

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator-(Field f);
Field operator*(double factor, Field f);

/// Throws ContractError unless both fields live on the same grid layout.
void require_same_grid(const Field& f, const Field& g);
bool same_grid(const GridPtr& a, const GridPtr& b);

/// <f> = sum_a w_a f_a, the quadrature of the integral of f over Q.
double total_charge(const Field& f);
double mean_value(const Field& f);
double inner_product(const Field& f, const Field& g);
/// Weighted L2 norm sqrt((f, f)).
double norm(const Field& f);

}  // namespace lockkey
