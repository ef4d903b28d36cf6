#include <array>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <string>

#include "cliff/blade.hpp"
#include "cliff/error.hpp"
#include "kernels_impl.hpp"

namespace cliff::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

namespace {

constexpr int kSlots = (kMaxGenerators + 1) * (kMaxGenerators + 1);

struct TableCache {
  std::array<std::once_flag, kSlots> once;
  std::array<std::unique_ptr<ProductTable>, kSlots> tables;
};

TableCache& table_cache() {
  static TableCache cache;
  return cache;
}

std::unique_ptr<ProductTable> build_table(const Signature& sig) {
  auto table = std::make_unique<ProductTable>();
  table->n = sig.n();
  table->dim = sig.dimension();
  table->signs.resize(table->dim * table->dim);
  for (std::uint32_t i = 0; i < table->dim; ++i) {
    for (std::uint32_t k = 0; k < table->dim; ++k) {
      table->signs[i * table->dim + k] = blade_product(Blade{i}, Blade{i ^ k}, sig).sign;
    }
  }
  return table;
}

const Kernels& pick_default() {
  if (const char* env = std::getenv("CLIFF_ISA")) {
    const std::string want(env);
    if (want == "scalar") return kernels_for(Isa::Scalar);
    if (want == "avx2") return kernels_for(Isa::Avx2);
  }
  if (isa_supported(Isa::Avx2)) return kernels_for(Isa::Avx2);
  return kernels_for(Isa::Scalar);
}

}  // namespace

const ProductTable& product_table(const Signature& sig) {
  const int slot = sig.p * (kMaxGenerators + 1) + sig.q;
  auto& cache = table_cache();
  std::call_once(cache.once[slot], [&] { cache.tables[slot] = build_table(sig); });
  return *cache.tables[slot];
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(CLIFF_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(ErrorKind::InvalidArgument,
                "kernel ISA " + std::string(to_string(isa)) + " is not available");
  }
#if defined(CLIFF_HAVE_AVX2)
  if (isa == Isa::Avx2) return detail::kAvx2Kernels;
#endif
  return detail::kScalarKernels;
}

const Kernels& active_kernels() {
  static const Kernels& chosen = pick_default();
  return chosen;
}

}  // namespace cliff::simd
