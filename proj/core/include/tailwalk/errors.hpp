#pragma once

#include <stdexcept>
#include <string>

namespace tailwalk {

/// Process exit codes used by the CLI. Library errors carry the code they
/// map to so the tool layer stays a thin translation.
enum class ExitCode : int {
  Ok = 0,
  ConfigError = 2,
  DirectnessViolation = 3,
  QuadratureFailure = 4,
  BudgetExhausted = 5,
};

class Error : public std::runtime_error {
 public:
  Error(std::string msg, ExitCode code)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Invalid parameters at object construction time (e.g. nonnegative drift).
struct ConstructionError : Error {
  explicit ConstructionError(std::string msg)
      : Error(std::move(msg), ExitCode::ConfigError) {}
};

/// Argument outside an operation's stated domain.
struct DomainError : Error {
  explicit DomainError(std::string msg)
      : Error(std::move(msg), ExitCode::ConfigError) {}
};

/// Adaptive quadrature or CDF inversion failed to reach tolerance within
/// its subdivision budget.
struct QuadratureError : Error {
  explicit QuadratureError(std::string msg)
      : Error(std::move(msg), ExitCode::QuadratureFailure) {}
};

/// No grid point certifies the sign condition needed for a direct proposal.
struct CertificationFailure : Error {
  explicit CertificationFailure(std::string msg)
      : Error(std::move(msg), ExitCode::DirectnessViolation) {}
};

/// A path with positive log likelihood ratio was observed in strict mode.
struct DirectnessViolation : Error {
  explicit DirectnessViolation(std::string msg)
      : Error(std::move(msg), ExitCode::DirectnessViolation) {}
};

/// An attempt or step budget was exhausted before the requested output.
struct BudgetExceeded : Error {
  explicit BudgetExceeded(std::string msg)
      : Error(std::move(msg), ExitCode::BudgetExhausted) {}
};

/// Experiment configuration failed validation.
struct ConfigError : Error {
  explicit ConfigError(std::string msg)
      : Error(std::move(msg), ExitCode::ConfigError) {}
};

/// Output files could not be written.
struct IoError : Error {
  explicit IoError(std::string msg)
      : Error(std::move(msg), ExitCode::ConfigError) {}
};

}  // namespace tailwalk
