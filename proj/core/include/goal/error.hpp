#ifndef GOAL_ERROR_HPP
#define GOAL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace goal {

/// Failure categories. The numeric values are the CLI exit codes.
enum class ErrorCode : int {
  kConfig = 2,
  kData = 3,
  kNumerical = 4,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

/// Invalid hyperparameters, flags, or config-file contents.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message)
      : Error(ErrorCode::kConfig, message) {}
};

/// Malformed, inconsistent, or non-finite input data (including dimension
/// mismatches between arguments).
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& message)
      : Error(ErrorCode::kData, message) {}
};

/// A metric that is not defined for the given input, e.g. AUC with one class.
class UndefinedMetric : public InvalidInput {
 public:
  explicit UndefinedMetric(const std::string& message)
      : InvalidInput(message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorCode::kNumerical, message) {}
};

}  // namespace goal

#endif  // GOAL_ERROR_HPP
