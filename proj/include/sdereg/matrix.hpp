#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdereg {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static Matrix identity(std::size_t n, double diag = 1.0) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = diag;
    return a;
  }

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  /// out = A v. `out` must not alias `v`.
  void apply(std::span<const double> v, std::span<double> out) const {
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      const double* row = data.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) s += row[j] * v[j];
      out[i] = s;
    }
  }

  Matrix scaled(double factor) const {
    Matrix a = *this;
    for (double& x : a.data) x *= factor;
    return a;
  }

  bool is_zero() const {
    for (double x : data)
      if (x != 0.0) return false;
    return true;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

}  // namespace sdereg
