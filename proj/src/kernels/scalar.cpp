#include <cmath>
#include <limits>

#include "sdereg/kernels.hpp"

namespace sdereg::kernels::detail {
namespace {

void accumulate_moments(const double* x, double* sum, double* sumsq,
                        std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += x[i];
    sumsq[i] += x[i] * x[i];
  }
}

void add_inplace(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}

void abs_diff(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(a[i] - b[i]);
}

void scale(double factor, const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = factor * in[i];
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double max_value(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, accumulate_moments, add_inplace,
                             abs_diff,    scale,              max_abs,
                             max_value};
  return t;
}

}  // namespace sdereg::kernels::detail
