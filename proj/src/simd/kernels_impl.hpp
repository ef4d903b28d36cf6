#pragma once

#include "cliff/simd/kernels.hpp"

namespace cliff::simd::detail {

extern const Kernels kScalarKernels;
#if defined(CLIFF_HAVE_AVX2)
extern const Kernels kAvx2Kernels;
#endif

}  // namespace cliff::simd::detail
