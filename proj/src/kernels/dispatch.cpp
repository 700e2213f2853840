#include <cstdlib>
#include <string_view>

#include "qsense/kernels.hpp"

namespace qsense::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &scalar::pauli_inner, &scalar::pauli_accumulate,
                                 &scalar::norm_squared};
  return table;
}

const KernelTable* avx2_table() {
#if defined(QSENSE_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", &avx2::pauli_inner, &avx2::pauli_accumulate,
                                 &avx2::norm_squared};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* forced = std::getenv("QSENSE_KERNELS");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

}  // namespace qsense::kernels
