#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmshare {

/// Error categories raised by the simulator. Names match the contract each
/// operation documents; tests assert on them.
enum class ErrorCode {
  NonPositiveParameter,
  ChunkOverflow,
  FloorTooLarge,
  BadArrayShape,
  NonPositiveDistance,
  OutageLink,
  AngleOutOfRange,
  OutageServingLink,
  ZeroUsers,
  EmptyInput,
  AllZero,
  DegenerateTrial,
  BadDensityList,
  UnknownConfigKey,
  BadConfigValue,
  IoError,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::ChunkOverflow: return "ChunkOverflow";
    case ErrorCode::FloorTooLarge: return "FloorTooLarge";
    case ErrorCode::BadArrayShape: return "BadArrayShape";
    case ErrorCode::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorCode::OutageLink: return "OutageLink";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::OutageServingLink: return "OutageServingLink";
    case ErrorCode::ZeroUsers: return "ZeroUsers";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::AllZero: return "AllZero";
    case ErrorCode::DegenerateTrial: return "DegenerateTrial";
    case ErrorCode::BadDensityList: return "BadDensityList";
    case ErrorCode::UnknownConfigKey: return "UnknownConfigKey";
    case ErrorCode::BadConfigValue: return "BadConfigValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ConfigViolation {
  ErrorCode code;
  std::string message;
};

/// Raised by configuration validation; carries every violated invariant so a
/// bad config is fixable in one pass.
class ConfigError : public SimError {
 public:
  explicit ConfigError(std::vector<ConfigViolation> violations)
      : SimError(violations.empty() ? ErrorCode::BadConfigValue : violations.front().code,
                 join(violations)),
        violations_(std::move(violations)) {}

  const std::vector<ConfigViolation>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<ConfigViolation>& violations) {
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += "; ";
      out += std::string(error_code_name(v.code)) + ": " + v.message;
    }
    return out.empty() ? std::string("invalid configuration") : out;
  }

  std::vector<ConfigViolation> violations_;
};

}  // namespace mmshare
