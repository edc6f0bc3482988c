#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csaug {

enum class ErrorCode {
  MalformedRecord,
  IllegalBioTransition,
  UnknownFormat,
  IoFailure,
  NonContiguousChunks,
  UnsupportedLanguage,
  ProviderUnavailable,
  RateLimited,
  ConfigurationError,
  EmptyTranslation,
  UnknownFamily,
  UnknownLabelInventory,
  EmptyBatch,
  DivergenceDetected,
  AugmentationFailed,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the library reports. The code lets
/// callers (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for failures that originate in a translation backend.
inline bool is_provider_error(ErrorCode code) {
  return code == ErrorCode::ProviderUnavailable ||
         code == ErrorCode::RateLimited ||
         code == ErrorCode::UnsupportedLanguage;
}

}  // namespace csaug
