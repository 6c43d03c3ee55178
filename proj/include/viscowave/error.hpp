#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

/// Parameter or input outside the documented range.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a diagnostic (e.g. p <= 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure did not reach its accuracy target.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved_value, double error_estimate)
      : std::runtime_error(what), value_(achieved_value), error_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double value_;
  double error_;
};

/// The data do not determine the answer (e.g. undeclared density tail).
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generic numerical failure (root finding, singular systems, vanishing denominators).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace viscowave
