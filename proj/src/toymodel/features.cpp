#include "csaug/toymodel/features.hpp"

#include "csaug/error.hpp"
#include "csaug/utf8.hpp"

namespace csaug::toy {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

FeatureExtractor::FeatureExtractor(std::size_t dim, std::size_t ngram) : dim_(dim), ngram_(ngram) {
  if (dim_ == 0 || ngram_ == 0) {
    throw Error(ErrorCode::ConfigurationError, "feature dimension and n-gram size must be positive");
  }
}

std::vector<std::size_t> FeatureExtractor::buckets(std::string_view token) const {
  const std::string marked = "^" + std::string(token) + "$";
  const auto units = utf8::code_units(marked);
  std::vector<std::size_t> out;
  if (units.size() <= ngram_) {
    out.push_back(fnv1a64(marked) % dim_);
    return out;
  }
  for (std::size_t i = 0; i + ngram_ <= units.size(); ++i) {
    const auto* first = units[i].data();
    const auto* last = units[i + ngram_ - 1].data() + units[i + ngram_ - 1].size();
    out.push_back(fnv1a64(std::string_view(first, static_cast<std::size_t>(last - first))) % dim_);
  }
  return out;
}

}  // namespace csaug::toy
