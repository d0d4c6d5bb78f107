#pragma once

#include <span>
#include <string>
#include <string_view>

namespace sdereg {

enum class NormKind { euclidean, max, one };

/// A norm on R^k. All three kinds satisfy the norm axioms exactly in real
/// arithmetic; the euclidean norm is evaluated as sqrt of a plain sum of
/// squares.
struct NormSpec {
  NormKind kind = NormKind::euclidean;

  double operator()(std::span<const double> v) const;

  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

double norm(NormKind kind, std::span<const double> v);

/// Norm of a - b without a temporary.
double distance(NormKind kind, std::span<const double> a,
                std::span<const double> b);

std::string_view to_string(NormKind kind);
NormKind parse_norm_kind(std::string_view name);

}  // namespace sdereg
