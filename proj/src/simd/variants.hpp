#pragma once

#include "cpr/simd/kernels.hpp"

namespace cpr::simd::detail {

// Defined only in translation units built with the matching target flags.
const KernelSet& avx2_table();
const KernelSet& neon_table();

}  // namespace cpr::simd::detail
