#pragma once

// Inner loops of the statevector engine. Each kernel has a scalar reference
// implementation and, when built with QSENSE_ENABLE_AVX2, an AVX2 variant.
// The variant used by the engine is picked once at startup from the CPU
// feature flags; QSENSE_KERNELS=scalar in the environment forces the
// reference path.
//
// Basis index bit q is the value of qubit q. A Pauli string is passed as its
// (x, z) masks; the kernels implement X^x Z^z, callers supply the i^k factor.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace qsense::kernels {

using cplx = std::complex<double>;

/// sum_k conj(bra[k ^ x]) * (-1)^popcount(k & z) * ket[k]
using PauliInnerFn = cplx (*)(std::span<const cplx> bra, std::span<const cplx> ket,
                              std::uint64_t x, std::uint64_t z);

/// out[k ^ x] += coeff * (-1)^popcount(k & z) * in[k]
using PauliAccumulateFn = void (*)(std::span<cplx> out, std::span<const cplx> in,
                                   std::uint64_t x, std::uint64_t z, cplx coeff);

/// sum_k |v[k]|^2
using NormSquaredFn = double (*)(std::span<const cplx> v);

struct KernelTable {
  std::string_view name;
  PauliInnerFn pauli_inner;
  PauliAccumulateFn pauli_accumulate;
  NormSquaredFn norm_squared;
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();
/// The table selected for this process.
const KernelTable& active();

namespace scalar {
cplx pauli_inner(std::span<const cplx> bra, std::span<const cplx> ket, std::uint64_t x,
                 std::uint64_t z);
void pauli_accumulate(std::span<cplx> out, std::span<const cplx> in, std::uint64_t x,
                      std::uint64_t z, cplx coeff);
double norm_squared(std::span<const cplx> v);
}  // namespace scalar

#if defined(QSENSE_HAVE_AVX2)
namespace avx2 {
cplx pauli_inner(std::span<const cplx> bra, std::span<const cplx> ket, std::uint64_t x,
                 std::uint64_t z);
void pauli_accumulate(std::span<cplx> out, std::span<const cplx> in, std::uint64_t x,
                      std::uint64_t z, cplx coeff);
double norm_squared(std::span<const cplx> v);
}  // namespace avx2
#endif

}  // namespace qsense::kernels
