#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cliff {

// Regular Cartesian grid over R^r. Nodes are numbered row-major: the last
// axis varies fastest.
struct Grid {
  int r = 0;
  std::vector<std::size_t> shape;
  std::vector<double> origin;
  std::vector<double> spacing;

  std::size_t node_count() const noexcept;
  std::size_t stride(int axis) const;
  std::size_t node(std::span<const std::size_t> index) const;
  std::vector<std::size_t> index(std::size_t node) const;
  std::vector<double> coordinates(std::size_t node) const;
  double coordinate(std::size_t node, int axis) const;

  bool operator==(const Grid&) const = default;
};

// Validates r >= 1, matching lengths, positive spacing and shape >= 1.
Grid make_grid(std::vector<std::size_t> shape, std::vector<double> origin,
               std::vector<double> spacing);

// shape nodes spanning [lower, upper] inclusive on every axis.
Grid make_grid_bounds(std::vector<std::size_t> shape, std::vector<double> lower,
                      std::vector<double> upper);

// Every node except those within `margin` nodes of a face.
std::vector<std::size_t> interior_nodes(const Grid& grid, std::size_t margin);

// Nodes whose coordinates lie in [lower, upper] on every axis.
std::vector<std::size_t> nodes_in_box(const Grid& grid, std::span<const double> lower,
                                      std::span<const double> upper);

}  // namespace cliff
