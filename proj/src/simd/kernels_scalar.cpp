#include <cstddef>

#include "kernels_impl.hpp"

namespace cliff::simd::detail {
namespace {

void geometric_product_scalar(const ProductTable& table, const double* a, const double* b,
                              double* out, bool subtract) {
  const std::size_t dim = table.dim;
  for (std::size_t i = 0; i < dim; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const double* s = table.signs.data() + i * dim;
    if (subtract) {
      for (std::size_t k = 0; k < dim; ++k) out[k] -= ai * (s[k] * b[i ^ k]);
    } else {
      for (std::size_t k = 0; k < dim; ++k) out[k] += ai * (s[k] * b[i ^ k]);
    }
  }
}

void axpy_scalar(std::size_t len, double alpha, const double* x, double* y) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

double sum_squares_scalar(std::size_t len, const double* x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[i] * x[i];
  return acc;
}

}  // namespace

const Kernels kScalarKernels{Isa::Scalar, geometric_product_scalar, axpy_scalar,
                             sum_squares_scalar};

}  // namespace cliff::simd::detail
