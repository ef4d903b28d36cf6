#include <immintrin.h>

#include <cstddef>

#include "kernels_impl.hpp"

namespace cliff::simd::detail {
namespace {

// Lanes l of a 4-wide block reordered to l ^ lo.
inline __m256d xor_permute(__m256d v, std::size_t lo) {
  switch (lo) {
    case 1: return _mm256_permute_pd(v, 0b0101);
    case 2: return _mm256_permute2f128_pd(v, v, 0x01);
    case 3: return _mm256_permute_pd(_mm256_permute2f128_pd(v, v, 0x01), 0b0101);
    default: return v;
  }
}

// Output block t gathers b[i ^ (4t + l)] = b[4 (hi ^ t) + (lo ^ l)]: a contiguous
// load of block hi ^ t followed by an in-register lane permutation.
void geometric_product_avx2(const ProductTable& table, const double* a, const double* b,
                            double* out, bool subtract) {
  const std::size_t dim = table.dim;
  if (dim < 4) {
    kScalarKernels.geometric_product(table, a, b, out, subtract);
    return;
  }
  const std::size_t blocks = dim / 4;
  for (std::size_t i = 0; i < dim; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const __m256d va = _mm256_set1_pd(ai);
    const std::size_t lo = i & 3;
    const std::size_t hi = i >> 2;
    const double* s = table.signs.data() + i * dim;
    for (std::size_t t = 0; t < blocks; ++t) {
      const __m256d vb = xor_permute(_mm256_loadu_pd(b + 4 * (hi ^ t)), lo);
      const __m256d term = _mm256_mul_pd(va, _mm256_mul_pd(_mm256_loadu_pd(s + 4 * t), vb));
      const __m256d acc = _mm256_loadu_pd(out + 4 * t);
      _mm256_storeu_pd(out + 4 * t,
                       subtract ? _mm256_sub_pd(acc, term) : _mm256_add_pd(acc, term));
    }
  }
}

void axpy_avx2(std::size_t len, double alpha, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

double sum_squares_avx2(std::size_t len, const double* x) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) total += x[i] * x[i];
  return total;
}

}  // namespace

const Kernels kAvx2Kernels{Isa::Avx2, geometric_product_avx2, axpy_avx2, sum_squares_avx2};

}  // namespace cliff::simd::detail
