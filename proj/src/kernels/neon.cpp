#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "sdereg/kernels.hpp"

namespace sdereg::kernels::detail {
namespace {

void accumulate_moments(const double* x, double* sum, double* sumsq,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    vst1q_f64(sum + i, vaddq_f64(vld1q_f64(sum + i), v));
    vst1q_f64(sumsq + i, vaddq_f64(vld1q_f64(sumsq + i), vmulq_f64(v, v)));
  }
  for (; i < n; ++i) {
    sum[i] += x[i];
    sumsq[i] += x[i] * x[i];
  }
}

void add_inplace(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), vld1q_f64(src + i)));
  for (; i < n; ++i) dst[i] += src[i];
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = std::abs(a[i] - b[i]);
}

void scale(double factor, const double* in, double* out, std::size_t n) {
  const float64x2_t f = vdupq_n_f64(factor);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(f, vld1q_f64(in + i)));
  for (; i < n; ++i) out[i] = factor * in[i];
}

double max_abs(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vmaxnmq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
  double m = vmaxnmvq_f64(acc);
  for (; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t acc = vdupq_n_f64(m);
    for (; i + 2 <= n; i += 2) acc = vmaxnmq_f64(acc, vld1q_f64(x + i));
    m = vmaxnmvq_f64(acc);
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable t{Isa::neon, accumulate_moments, add_inplace,
                             abs_diff,  scale,              max_abs,
                             max_value};
  return &t;
}

}  // namespace sdereg::kernels::detail
