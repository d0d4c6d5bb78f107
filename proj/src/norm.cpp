#include "sdereg/norm.hpp"

#include <algorithm>
#include <cmath>

#include "sdereg/error.hpp"

namespace sdereg {

double norm(NormKind kind, std::span<const double> v) {
  switch (kind) {
    case NormKind::euclidean: {
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case NormKind::max: {
      double s = 0.0;
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
    }
    case NormKind::one: {
      double s = 0.0;
      for (double x : v) s += std::abs(x);
      return s;
    }
  }
  return 0.0;
}

double distance(NormKind kind, std::span<const double> a,
                std::span<const double> b) {
  if (a.size() == 1) return std::abs(a[0] - b[0]);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    switch (kind) {
      case NormKind::euclidean: s += diff * diff; break;
      case NormKind::max: s = std::max(s, std::abs(diff)); break;
      case NormKind::one: s += std::abs(diff); break;
    }
  }
  return kind == NormKind::euclidean ? std::sqrt(s) : s;
}

double NormSpec::operator()(std::span<const double> v) const {
  return norm(kind, v);
}

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::max: return "max";
    case NormKind::one: return "one";
  }
  return "euclidean";
}

NormKind parse_norm_kind(std::string_view name) {
  if (name == "euclidean") return NormKind::euclidean;
  if (name == "max") return NormKind::max;
  if (name == "one") return NormKind::one;
  throw CatalogError("unknown norm '" + std::string(name) + "'");
}

}  // namespace sdereg
