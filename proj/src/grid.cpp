#include "lockkey/grid.hpp"

#include <cmath>
#include <string>

#include "lockkey/errors.hpp"

namespace lockkey {

DomainGrid::DomainGrid(int dimension, double box_side, int cells_per_axis,
                       double scale, Eigen::MatrixXd nodes,
                       Eigen::VectorXd weights)
    : dimension_(dimension),
      box_side_(box_side),
      cells_per_axis_(cells_per_axis),
      scale_(scale),
      measure_(weights.sum()),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {
  if (nodes_.rows() != weights_.size() || nodes_.cols() != dimension_) {
    throw ContractError("grid nodes and weights disagree in shape");
  }
  if (weights_.size() == 0 || (weights_.array() <= 0.0).any()) {
    throw ContractError("grid weights must be positive");
  }
}

bool DomainGrid::same_layout(const DomainGrid& other) const {
  return dimension_ == other.dimension_ && nodes_.rows() == other.nodes_.rows() &&
         nodes_ == other.nodes_ && weights_ == other.weights_;
}

GridPtr build_grid(int dimension, double box_side, int cells_per_axis,
                   double scale, std::size_t max_nodes) {
  if (dimension < 1 || dimension > 3) {
    throw InputError("grid dimension must be 1, 2 or 3");
  }
  if (cells_per_axis < 1) {
    throw InputError("grid cells_per_axis must be >= 1");
  }
  if (!(std::isfinite(box_side) && box_side > 0.0)) {
    throw InputError("grid box_side must be positive");
  }
  if (!(std::isfinite(scale) && scale > 0.0)) {
    throw InputError("grid scale must be positive");
  }
  double count = std::pow(static_cast<double>(cells_per_axis), dimension);
  if (count > static_cast<double>(max_nodes)) {
    throw ResourceError("grid would have " + std::to_string(static_cast<long long>(count)) +
                        " nodes, above the cap of " + std::to_string(max_nodes));
  }

  const Eigen::Index n = static_cast<Eigen::Index>(count);
  const double h = box_side * scale / cells_per_axis;
  Eigen::MatrixXd nodes(n, dimension);
  // Node a has axis indices given by the base-cells_per_axis digits of a,
  // last axis fastest.
  for (Eigen::Index a = 0; a < n; ++a) {
    Eigen::Index rest = a;
    for (int axis = dimension - 1; axis >= 0; --axis) {
      nodes(a, axis) = (static_cast<double>(rest % cells_per_axis) + 0.5) * h;
      rest /= cells_per_axis;
    }
  }
  Eigen::VectorXd weights = Eigen::VectorXd::Constant(n, std::pow(h, dimension));
  return std::make_shared<const DomainGrid>(dimension, box_side, cells_per_axis, scale,
                                            std::move(nodes), std::move(weights));
}

GridPtr build_grid(const GridSpec& spec) {
  return build_grid(spec.dimension, spec.box_side, spec.cells_per_axis, spec.scale,
                    spec.max_nodes);
}

GridPtr scale_domain(const DomainGrid& grid, double r) {
  if (!(std::isfinite(r) && r > 0.0)) {
    throw InputError("domain scale must be positive");
  }
  const double factor = r / grid.scale();
  Eigen::MatrixXd nodes = grid.nodes() * factor;
  Eigen::VectorXd weights = grid.weights() * std::pow(factor, grid.dimension());
  return std::make_shared<const DomainGrid>(grid.dimension(), grid.box_side(),
                                            grid.cells_per_axis(), r, std::move(nodes),
                                            std::move(weights));
}

Field::Field(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) {
    throw ContractError("field needs a grid");
  }
  if (values_.size() != grid_->node_count()) {
    throw ContractError("field has " + std::to_string(values_.size()) + " values for " +
                        std::to_string(grid_->node_count()) + " nodes");
  }
  if (!values_.allFinite()) {
    throw InputError("field values must be finite");
  }
}

Field Field::constant(GridPtr grid, double value) {
  const Eigen::Index n = grid ? grid->node_count() : 0;
  return Field(std::move(grid), Eigen::VectorXd::Constant(n, value));
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  values_ += other.values_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  values_ -= other.values_;
  return *this;
}

Field& Field::operator*=(double factor) {
  values_ *= factor;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator-(Field f) { return f *= -1.0; }
Field operator*(double factor, Field f) { return f *= factor; }

bool same_grid(const GridPtr& a, const GridPtr& b) {
  return a == b || (a && b && a->same_layout(*b));
}

void require_same_grid(const Field& f, const Field& g) {
  if (!same_grid(f.grid(), g.grid())) {
    throw ContractError("fields live on different grids");
  }
}

double total_charge(const Field& f) { return f.grid()->weights().dot(f.values()); }

double mean_value(const Field& f) { return total_charge(f) / f.grid()->measure(); }

double inner_product(const Field& f, const Field& g) {
  require_same_grid(f, g);
  return (f.grid()->weights().array() * f.values().array() * g.values().array()).sum();
}

double norm(const Field& f) { return std::sqrt(inner_product(f, f)); }

}  // namespace lockkey
