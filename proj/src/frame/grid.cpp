#include "cliff/grid.hpp"

#include <string>

#include "cliff/error.hpp"

namespace cliff {

std::size_t Grid::node_count() const noexcept {
  std::size_t count = 1;
  for (auto s : shape) count *= s;
  return count;
}

std::size_t Grid::stride(int axis) const {
  if (axis < 0 || axis >= r) {
    throw Error(ErrorKind::AxisOutOfRange,
                "axis " + std::to_string(axis + 1) + " outside 1.." + std::to_string(r));
  }
  std::size_t s = 1;
  for (int a = r - 1; a > axis; --a) s *= shape[a];
  return s;
}

std::size_t Grid::node(std::span<const std::size_t> index) const {
  std::size_t node = 0;
  for (int a = 0; a < r; ++a) node = node * shape[a] + index[a];
  return node;
}

std::vector<std::size_t> Grid::index(std::size_t node) const {
  std::vector<std::size_t> idx(r);
  for (int a = r - 1; a >= 0; --a) {
    idx[a] = node % shape[a];
    node /= shape[a];
  }
  return idx;
}

std::vector<double> Grid::coordinates(std::size_t node) const {
  const auto idx = index(node);
  std::vector<double> x(r);
  for (int a = 0; a < r; ++a) x[a] = origin[a] + static_cast<double>(idx[a]) * spacing[a];
  return x;
}

double Grid::coordinate(std::size_t node, int axis) const {
  const std::size_t i = (node / stride(axis)) % shape[axis];
  return origin[axis] + static_cast<double>(i) * spacing[axis];
}

Grid make_grid(std::vector<std::size_t> shape, std::vector<double> origin,
               std::vector<double> spacing) {
  const std::size_t r = shape.size();
  if (r == 0) throw Error(ErrorKind::InvalidArgument, "grid needs at least one axis");
  if (origin.size() != r || spacing.size() != r) {
    throw Error(ErrorKind::InvalidArgument, "grid shape, origin and spacing lengths differ");
  }
  for (std::size_t a = 0; a < r; ++a) {
    if (shape[a] == 0) throw Error(ErrorKind::InvalidArgument, "grid axis with no nodes");
    if (!(spacing[a] > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be > 0");
  }
  return Grid{static_cast<int>(r), std::move(shape), std::move(origin), std::move(spacing)};
}

Grid make_grid_bounds(std::vector<std::size_t> shape, std::vector<double> lower,
                      std::vector<double> upper) {
  if (lower.size() != shape.size() || upper.size() != shape.size()) {
    throw Error(ErrorKind::InvalidArgument, "grid shape and bounds lengths differ");
  }
  std::vector<double> spacing(shape.size());
  for (std::size_t a = 0; a < shape.size(); ++a) {
    if (shape[a] < 2) throw Error(ErrorKind::InvalidArgument, "bounded grid axis needs 2 nodes");
    spacing[a] = (upper[a] - lower[a]) / static_cast<double>(shape[a] - 1);
  }
  return make_grid(std::move(shape), std::move(lower), std::move(spacing));
}

std::vector<std::size_t> interior_nodes(const Grid& grid, std::size_t margin) {
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto idx = grid.index(node);
    bool inside = true;
    for (int a = 0; a < grid.r && inside; ++a) {
      inside = idx[a] >= margin && idx[a] + margin < grid.shape[a];
    }
    if (inside) out.push_back(node);
  }
  return out;
}

std::vector<std::size_t> nodes_in_box(const Grid& grid, std::span<const double> lower,
                                      std::span<const double> upper) {
  std::vector<std::size_t> out;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    bool inside = true;
    for (int a = 0; a < grid.r && inside; ++a) {
      const double x = grid.coordinate(node, a);
      // Small slack so box edges that land on nodes are included on every grid.
      const double slack = 1e-9 * grid.spacing[a];
      inside = x >= lower[a] - slack && x <= upper[a] + slack;
    }
    if (inside) out.push_back(node);
  }
  return out;
}

}  // namespace cliff
