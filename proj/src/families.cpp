#include "csaug/families.hpp"

#include <algorithm>
#include <array>

#include "csaug/error.hpp"

namespace csaug {

namespace {

const std::vector<Family>& registry() {
  static const std::vector<Family> families = {
      {"afro-asiatic", "Afro-Asiatic", {"ar", "am", "he", "so"}},
      {"germanic", "Germanic", {"de", "nl", "da", "sv", "no"}},
      {"indo-aryan", "Indo-Aryan", {"hi", "bn", "mr", "ne", "gu", "pa"}},
      {"romance", "Romance", {"es", "pt", "fr", "it", "ro"}},
      {"sino-tibetan-japonic", "Sino-Tibetan & Japonic", {"zh-cn", "ja", "ko"}},
      {"turkic", "Turkic", {"tr", "az", "ug", "kk"}},
  };
  return families;
}

bool all_of_class(std::string_view s, bool digits_ok) {
  return std::all_of(s.begin(), s.end(), [&](char c) {
    return (c >= 'a' && c <= 'z') || (digits_ok && c >= '0' && c <= '9');
  });
}

}  // namespace

std::span<const Family> family_registry() { return registry(); }

const Family& find_family(std::string_view name) {
  for (const auto& f : registry()) {
    if (f.name == name) return f;
  }
  throw Error(ErrorCode::UnknownFamily, "unknown language family '" + std::string(name) + "'");
}

std::set<std::string> family_members(std::string_view name) {
  const auto& f = find_family(name);
  return {f.members.begin(), f.members.end()};
}

bool is_scriptio_continua(std::string_view lang) {
  static constexpr std::array<std::string_view, 4> kCodes = {"zh-cn", "zh-tw", "zh", "ja"};
  return std::find(kCodes.begin(), kCodes.end(), lang) != kCodes.end();
}

bool is_language_code(std::string_view code) {
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const auto pos = code.find('-', start);
    const auto part = code.substr(start, pos == std::string_view::npos ? pos : pos - start);
    if (first) {
      if (part.size() < 2 || part.size() > 3 || !all_of_class(part, false)) return false;
    } else if (part.size() < 2 || part.size() > 8 || !all_of_class(part, true)) {
      return false;
    }
    if (pos == std::string_view::npos) return true;
    start = pos + 1;
    first = false;
  }
}

}  // namespace csaug
