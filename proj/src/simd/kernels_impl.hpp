#pragma once

#include "sorptran/simd/kernels.hpp"

namespace sorptran::simd::detail {

const KernelTable& scalar_table() noexcept;
#if defined(SORPTRAN_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

} // namespace sorptran::simd::detail
