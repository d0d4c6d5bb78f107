#pragma once

// Data-parallel inner loops of the Monte Carlo estimators.
//
// Every kernel exists as a portable scalar reference and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant chosen once at
// runtime. Variants only use lane-wise IEEE add/sub/mul/max/abs, never fused
// multiply-add, so each variant returns results bitwise identical to the
// scalar reference; tests/unit/kernels_test.cpp holds them to that.

#include <cstddef>
#include <span>
#include <string_view>

namespace sdereg::kernels {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
  Isa isa;
  // sum[i] += x[i]; sumsq[i] += x[i] * x[i]
  void (*accumulate_moments)(const double* x, double* sum, double* sumsq,
                             std::size_t n);
  // dst[i] += src[i]
  void (*add_inplace)(double* dst, const double* src, std::size_t n);
  // out[i] = |a[i] - b[i]|
  void (*abs_diff)(const double* a, const double* b, double* out,
                   std::size_t n);
  // out[i] = factor * in[i]
  void (*scale)(double factor, const double* in, double* out, std::size_t n);
  // max_i |x[i]|, 0 for n == 0
  double (*max_abs)(const double* x, std::size_t n);
  // max_i x[i], -inf for n == 0
  double (*max_value)(const double* x, std::size_t n);
};

bool supported(Isa isa);

/// Table for a specific instruction set. Throws PreconditionError if the
/// running CPU (or the build) does not support it.
const KernelTable& table(Isa isa);

/// Best supported table, detected on first use.
const KernelTable& active();

std::string_view to_string(Isa isa);

namespace detail {
const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in
const KernelTable* neon_table();  // nullptr when not compiled in
}  // namespace detail

// Span conveniences over the active table.
inline void accumulate_moments(std::span<const double> x, std::span<double> sum,
                               std::span<double> sumsq) {
  active().accumulate_moments(x.data(), sum.data(), sumsq.data(), x.size());
}
inline void add_inplace(std::span<double> dst, std::span<const double> src) {
  active().add_inplace(dst.data(), src.data(), dst.size());
}
inline void abs_diff(std::span<const double> a, std::span<const double> b,
                     std::span<double> out) {
  active().abs_diff(a.data(), b.data(), out.data(), out.size());
}
inline void scale(double factor, std::span<const double> in,
                  std::span<double> out) {
  active().scale(factor, in.data(), out.data(), out.size());
}
inline double max_abs(std::span<const double> x) {
  return active().max_abs(x.data(), x.size());
}
inline double max_value(std::span<const double> x) {
  return active().max_value(x.data(), x.size());
}

}  // namespace sdereg::kernels
