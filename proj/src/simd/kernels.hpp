#pragma once

#include "geoimpute/simd.hpp"

namespace geoimpute::simd::detail {

const KernelTable& scalar_kernels() noexcept;
#if defined(GEOIMPUTE_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

}  // namespace geoimpute::simd::detail
