#pragma once

#include <stdexcept>
#include <string>

namespace spdgeo {

// Every failure raised by the library carries a short machine-readable kind
// ("domain", "dimension", ...) which the command line tool copies into its
// error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& message) : Error("dimension", message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message) : Error("precondition", message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse", message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& message, long dimension = -1, double condition = 0.0)
      : Error("numerical", message), dimension_(dimension), condition_(condition) {}
  long dimension() const noexcept { return dimension_; }
  double condition() const noexcept { return condition_; }

 private:
  long dimension_;
  double condition_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double last_residual)
      : Error("convergence", message), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace spdgeo
