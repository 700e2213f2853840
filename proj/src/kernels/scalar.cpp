#include <bit>

#include "qsense/kernels.hpp"

namespace qsense::kernels::scalar {

cplx pauli_inner(std::span<const cplx> bra, std::span<const cplx> ket, std::uint64_t x,
                 std::uint64_t z) {
  double re = 0.0;
  double im = 0.0;
  const std::size_t dim = ket.size();
  for (std::size_t k = 0; k < dim; ++k) {
    const cplx b = bra[k ^ x];
    const cplx a = ket[k];
    const double s = (std::popcount(k & z) & 1) ? -1.0 : 1.0;
    re += s * (b.real() * a.real() + b.imag() * a.imag());
    im += s * (b.real() * a.imag() - b.imag() * a.real());
  }
  return {re, im};
}

void pauli_accumulate(std::span<cplx> out, std::span<const cplx> in, std::uint64_t x,
                      std::uint64_t z, cplx coeff) {
  const std::size_t dim = in.size();
  for (std::size_t k = 0; k < dim; ++k) {
    const double s = (std::popcount(k & z) & 1) ? -1.0 : 1.0;
    out[k ^ x] += (s * coeff) * in[k];
  }
}

double norm_squared(std::span<const cplx> v) {
  double total = 0.0;
  for (const cplx& a : v) total += a.real() * a.real() + a.imag() * a.imag();
  return total;
}

}  // namespace qsense::kernels::scalar
