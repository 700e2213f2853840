// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "qsense/kernels.hpp"

namespace qsense::kernels::avx2 {

namespace {

inline __m256d pair_signs(std::uint64_t k, std::uint64_t z, double low_bit_sign) {
  const double s = (std::popcount(k & z) & 1) ? -1.0 : 1.0;
  return _mm256_set_pd(s * low_bit_sign, s * low_bit_sign, s, s);
}

}  // namespace

cplx pauli_inner(std::span<const cplx> bra, std::span<const cplx> ket, std::uint64_t x,
                 std::uint64_t z) {
  const std::size_t dim = ket.size();
  if (dim < 2) return scalar::pauli_inner(bra, ket, x, z);
  const auto* a_ptr = reinterpret_cast<const double*>(ket.data());
  const auto* b_ptr = reinterpret_cast<const double*>(bra.data());
  const bool swap = (x & 1) != 0;
  const double t = (z & 1) ? -1.0 : 1.0;

  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  for (std::size_t k = 0; k < dim; k += 2) {
    const __m256d a = _mm256_loadu_pd(a_ptr + 2 * k);
    __m256d b = _mm256_loadu_pd(b_ptr + 2 * ((k ^ x) & ~std::uint64_t{1}));
    if (swap) b = _mm256_permute2f128_pd(b, b, 1);
    const __m256d sv = pair_signs(k, z, t);
    // [br*ar, bi*ai, ...] sums to Re(conj(b) a); [br*ai, bi*ar, ...] alternates to Im.
    const __m256d p = _mm256_mul_pd(b, a);
    const __m256d q = _mm256_mul_pd(b, _mm256_permute_pd(a, 0b0101));
    acc_re = _mm256_fmadd_pd(sv, p, acc_re);
    acc_im = _mm256_fmadd_pd(sv, q, acc_im);
  }
  alignas(32) double re[4];
  alignas(32) double im[4];
  _mm256_store_pd(re, acc_re);
  _mm256_store_pd(im, acc_im);
  return {re[0] + re[1] + re[2] + re[3], im[0] - im[1] + im[2] - im[3]};
}

void pauli_accumulate(std::span<cplx> out, std::span<const cplx> in, std::uint64_t x,
                      std::uint64_t z, cplx coeff) {
  const std::size_t dim = in.size();
  if (dim < 2) {
    scalar::pauli_accumulate(out, in, x, z, coeff);
    return;
  }
  const auto* in_ptr = reinterpret_cast<const double*>(in.data());
  auto* out_ptr = reinterpret_cast<double*>(out.data());
  const bool swap = (x & 1) != 0;
  const double t = (z & 1) ? -1.0 : 1.0;
  const __m256d cr = _mm256_set1_pd(coeff.real());
  const __m256d ci = _mm256_set_pd(coeff.imag(), -coeff.imag(), coeff.imag(), -coeff.imag());

  for (std::size_t k = 0; k < dim; k += 2) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(in_ptr + 2 * k), pair_signs(k, z, t));
    __m256d w = _mm256_fmadd_pd(ci, _mm256_permute_pd(v, 0b0101), _mm256_mul_pd(cr, v));
    if (swap) w = _mm256_permute2f128_pd(w, w, 1);
    double* dst = out_ptr + 2 * ((k ^ x) & ~std::uint64_t{1});
    _mm256_storeu_pd(dst, _mm256_add_pd(_mm256_loadu_pd(dst), w));
  }
}

double norm_squared(std::span<const cplx> v) {
  const std::size_t dim = v.size();
  const auto* p = reinterpret_cast<const double*>(v.data());
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= dim; k += 2) {
    const __m256d a = _mm256_loadu_pd(p + 2 * k);
    acc = _mm256_fmadd_pd(a, a, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; k < dim; ++k) total += std::norm(v[k]);
  return total;
}

}  // namespace qsense::kernels::avx2
