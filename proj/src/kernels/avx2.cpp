#include <immintrin.h>

#include <cmath>
#include <limits>

#include "sdereg/kernels.hpp"

#define SDEREG_AVX2 __attribute__((target("avx2")))

namespace sdereg::kernels::detail {
namespace {

SDEREG_AVX2 inline __m256d abs_pd(__m256d v) {
  const __m256d mask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  return _mm256_and_pd(v, mask);
}

// Horizontal max of four lanes.
SDEREG_AVX2 inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  hi = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_max_sd(lo, hi));
}

SDEREG_AVX2 void accumulate_moments(const double* x, double* sum, double* sumsq,
                                    std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(sum + i, _mm256_add_pd(_mm256_loadu_pd(sum + i), v));
    _mm256_storeu_pd(sumsq + i, _mm256_add_pd(_mm256_loadu_pd(sumsq + i),
                                              _mm256_mul_pd(v, v)));
  }
  for (; i < n; ++i) {
    sum[i] += x[i];
    sumsq[i] += x[i] * x[i];
  }
}

SDEREG_AVX2 void add_inplace(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i),
                                            _mm256_loadu_pd(src + i)));
  for (; i < n; ++i) dst[i] += src[i];
}

SDEREG_AVX2 void abs_diff(const double* a, const double* b, double* out,
                          std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                   _mm256_loadu_pd(b + i))));
  for (; i < n; ++i) out[i] = std::abs(a[i] - b[i]);
}

SDEREG_AVX2 void scale(double factor, const double* in, double* out,
                       std::size_t n) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(f, _mm256_loadu_pd(in + i)));
  for (; i < n; ++i) out[i] = factor * in[i];
}

// The loaded value is the first max_pd operand so a NaN input is skipped,
// as the scalar comparison does.
SDEREG_AVX2 double max_abs(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(abs_pd(_mm256_loadu_pd(x + i)), acc);
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

SDEREG_AVX2 double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(_mm256_loadu_pd(x + i), acc);
    m = hmax(acc);
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{Isa::avx2, accumulate_moments, add_inplace,
                             abs_diff,  scale,              max_abs,
                             max_value};
  return &t;
}

}  // namespace sdereg::kernels::detail
