#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace omniwheg {

/// Argument outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Operation requested while the wheels are in an incompatible mode.
class ModeError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Drive motor cannot supply the torque a quasi-static step needs.
class StallError : public std::runtime_error {
public:
  StallError(double required, double limit)
      : std::runtime_error("stall: required torque " + std::to_string(required) +
                           " N*m exceeds limit " + std::to_string(limit) + " N*m"),
        required_(required), limit_(limit) {}

  double required() const { return required_; }
  double limit() const { return limit_; }

private:
  double required_;
  double limit_;
};

/// Planner asked for a plan on an obstacle it cannot negotiate.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(std::string reason)
      : std::runtime_error("infeasible: " + reason), reason_(std::move(reason)) {}

  const std::string &reason() const { return reason_; }

private:
  std::string reason_;
};

/// Scenario text rejected; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Malformed telemetry/current log; carries the 1-based row (file line) number.
class DataError : public std::runtime_error {
public:
  DataError(std::size_t row, const std::string &message)
      : std::runtime_error("row " + std::to_string(row) + ": " + message), row_(row) {}

  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

} // namespace omniwheg
