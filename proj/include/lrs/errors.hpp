#pragma once

#include <stdexcept>
#include <string>

namespace lrs {

/// Argument outside the physical domain of an operation (negative loss,
/// sigma outside (0, 1], empty channel list, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation hit a pole of a resonant response.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_abs_error, double value)
      : std::runtime_error(what), achieved_abs_error_(achieved_abs_error), value_(value) {}

  double achieved_abs_error() const noexcept { return achieved_abs_error_; }
  double value() const noexcept { return value_; }

 private:
  double achieved_abs_error_;
  double value_;
};

/// A grid is too coarse or too small for the requested tolerance.
class GridResolutionError : public std::runtime_error {
 public:
  GridResolutionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Configuration problem, tagged with the offending field path (e.g. "system.channels").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace lrs
