#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cliff/signature.hpp"

namespace cliff::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Signs of blade products laid out by output index:
// signs[i * dim + k] = sign of e^i e^{i xor k}. Built once per (p, q).
struct ProductTable {
  int n = 0;
  std::size_t dim = 0;
  std::vector<double> signs;
};

const ProductTable& product_table(const Signature& sig);

// Inner loops of the engine. Every variant must produce bitwise identical
// results for geometric_product and axpy; sum_squares may differ in the last
// few ulps because the reduction order is ISA specific.
struct Kernels {
  Isa isa;
  // out[k] += a[i] * (signs[i][k] * b[i ^ k]) for i ascending (or -= when
  // subtract is set). Zero entries of a are skipped.
  void (*geometric_product)(const ProductTable& table, const double* a, const double* b,
                            double* out, bool subtract);
  // y[i] += alpha * x[i]
  void (*axpy)(std::size_t len, double alpha, const double* x, double* y);
  double (*sum_squares)(std::size_t len, const double* x);
};

bool isa_supported(Isa isa);

// Throws InvalidArgument when the ISA is not compiled in or not supported by
// the running CPU.
const Kernels& kernels_for(Isa isa);

// The variant used by the engine: the best supported ISA, unless the
// CLIFF_ISA environment variable ("scalar" or "avx2") asks for another one.
// Resolved once per process.
const Kernels& active_kernels();

}  // namespace cliff::simd
