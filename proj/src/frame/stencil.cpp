#include <string>

#include "cliff/error.hpp"
#include "cliff/frame.hpp"

namespace cliff {

namespace {

// Stencils are written as weighted differences so a constant field gives
// exactly zero.
void differentiate_plane(const double* in, double* out, const Grid& grid, int mu,
                         std::size_t block, const Exec& exec) {
  const std::size_t n_axis = grid.shape[mu];
  const std::size_t s = grid.stride(mu) * block;
  const double h = grid.spacing[mu];
  const double c8 = 8.0 / (12.0 * h);
  const double c1 = 1.0 / (12.0 * h);
  const double c2 = 1.0 / (2.0 * h);

  parallel_for(grid.node_count(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t node = begin; node < end; ++node) {
      const std::size_t i = (node / grid.stride(mu)) % n_axis;
      const double* f = in + node * block;
      double* d = out + node * block;
      if (i >= 2 && i + 2 < n_axis) {
        for (std::size_t k = 0; k < block; ++k) {
          d[k] = (f[k + s] - f[k - s]) * c8 + (f[k - 2 * s] - f[k + 2 * s]) * c1;
        }
      } else if (i == 0) {
        for (std::size_t k = 0; k < block; ++k) {
          d[k] = (3.0 * (f[k + s] - f[k]) + (f[k + s] - f[k + 2 * s])) * c2;
        }
      } else if (i + 1 == n_axis) {
        for (std::size_t k = 0; k < block; ++k) {
          d[k] = (3.0 * (f[k] - f[k - s]) + (f[k - 2 * s] - f[k - s])) * c2;
        }
      } else {
        for (std::size_t k = 0; k < block; ++k) d[k] = (f[k + s] - f[k - s]) * c2;
      }
    }
  });
}

}  // namespace

Field partial_derivative(const Field& f, int mu, const Exec& exec) {
  const Grid& grid = f.grid();
  if (mu < 0 || mu >= grid.r) {
    throw Error(ErrorKind::AxisOutOfRange,
                "axis " + std::to_string(mu + 1) + " outside 1.." + std::to_string(grid.r));
  }
  if (grid.shape[mu] < 5) {
    throw Error(ErrorKind::InvalidArgument,
                "derivative along axis " + std::to_string(mu + 1) + " needs at least 5 nodes");
  }
  Field out(grid, f.signature(), f.kind());
  differentiate_plane(f.real().data(), out.real().data(), grid, mu, f.node_stride(), exec);
  if (f.signature().is_complex()) {
    differentiate_plane(f.imag().data(), out.imag().data(), grid, mu, f.node_stride(), exec);
  }
  return out;
}

}  // namespace cliff
