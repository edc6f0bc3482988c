#include "csaug/error.hpp"

namespace csaug {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::IllegalBioTransition: return "IllegalBIOTransition";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NonContiguousChunks: return "NonContiguousChunks";
    case ErrorCode::UnsupportedLanguage: return "UnsupportedLanguage";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::ConfigurationError: return "ConfigurationError";
    case ErrorCode::EmptyTranslation: return "EmptyTranslation";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::UnknownLabelInventory: return "UnknownLabelInventory";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::AugmentationFailed: return "AugmentationFailed";
  }
  return "Unknown";
}

}  // namespace csaug
