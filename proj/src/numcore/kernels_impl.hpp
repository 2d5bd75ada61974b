#pragma once

#include "morphoseq/kernels.hpp"

namespace morphoseq::kernels::detail {

extern const KernelTable kScalarTable;

// Defined only when the compiler can emit AVX2 code for this target.
const KernelTable* avx2_table_if_compiled();

}  // namespace morphoseq::kernels::detail
