#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdereg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown catalog entry or unknown enumerator name.
class CatalogError : public Error {
 public:
  using Error::Error;
};

/// A model function returned a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const { return point_; }

 private:
  std::vector<double> point_;
};

/// A recursion produced a non-finite entry at `step()`.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Two objects that must live on the same time grid do not.
class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Input outside the set on which an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Argument violating a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Monte Carlo estimator could not produce a trustworthy value.
class EstimatorError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text; `line()` is 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sdereg
