// Compiled with -mavx2 -mfma; only called after a runtime CPU check.
#include <immintrin.h>

#include "fredev/simd.hpp"

namespace fredev::simd::avx2 {

namespace {

// Two complex numbers per register, interleaved (re0, im0, re1, im1).
inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * x for broadcast parts (ar, ai) of a.
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d x) {
  const __m256d xswap = _mm256_permute_pd(x, 0b0101);
  return _mm256_fmaddsub_pd(ar, x, _mm256_mul_pd(ai, xswap));
}

// Elementwise x * y.
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d xr = _mm256_movedup_pd(x);
  const __m256d xi = _mm256_permute_pd(x, 0b1111);
  const __m256d yswap = _mm256_permute_pd(y, 0b0101);
  return _mm256_fmaddsub_pd(xr, y, _mm256_mul_pd(xi, yswap));
}

}  // namespace

void axpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d y0 = load2(y + i), y1 = load2(y + i + 2);
    y0 = _mm256_add_pd(y0, cmul_bcast(ar, ai, load2(x + i)));
    y1 = _mm256_add_pd(y1, cmul_bcast(ar, ai, load2(x + i + 2)));
    store2(y + i, y0);
    store2(y + i + 2, y1);
  }
  for (; i + 2 <= n; i += 2) store2(y + i, _mm256_add_pd(load2(y + i), cmul_bcast(ar, ai, load2(x + i))));
  if (i < n) scalar::axpy(n - i, a, x + i, y + i);
}

cplx dotu(std::size_t n, const cplx* x, const cplx* y) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(load2(x + i), load2(y + i)));
    acc1 = _mm256_add_pd(acc1, cmul(load2(x + i + 2), load2(y + i + 2)));
  }
  for (; i + 2 <= n; i += 2) acc0 = _mm256_add_pd(acc0, cmul(load2(x + i), load2(y + i)));
  const __m256d acc = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cplx sum(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  if (i < n) sum += scalar::dotu(n - i, x + i, y + i);
  return sum;
}

}  // namespace fredev::simd::avx2
