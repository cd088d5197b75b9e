#pragma once
#include "qts/simd/kernels.hpp"

namespace qts::simd::detail {
extern const KernelSet scalar_kernels;
#ifdef QTS_BUILD_AVX2
extern const KernelSet avx2_kernels;
#endif
}  // namespace qts::simd::detail
