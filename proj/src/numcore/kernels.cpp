#include "kernels_impl.hpp"

#include <cstdlib>
#include <string_view>

namespace morphoseq::kernels {

const KernelTable& scalar_table() { return detail::kScalarTable; }

const KernelTable* avx2_table() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? detail::avx2_table_if_compiled() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("MORPHOSEQ_SIMD")) {
    if (std::string_view(forced) == "scalar") return scalar_table();
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace morphoseq::kernels
