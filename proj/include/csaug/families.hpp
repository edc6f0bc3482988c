#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csaug {

/// A language group usable as a constrained code-switching pool.
struct Family {
  std::string name;          // CLI key, e.g. "sino-tibetan-japonic"
  std::string display_name;  // e.g. "Sino-Tibetan & Japonic"
  std::vector<std::string> members;
};

/// The six built-in groups, in presentation order.
std::span<const Family> family_registry();

/// Throws UnknownFamily.
const Family& find_family(std::string_view name);
std::set<std::string> family_members(std::string_view name);

/// Languages written without spaces between words; translated text in these
/// languages is segmented by script runs rather than whitespace alone.
bool is_scriptio_continua(std::string_view lang);

/// Lowercase BCP-47-style tag: `[a-z]{2,3}(-[a-z0-9]{2,8})*`.
bool is_language_code(std::string_view code);

}  // namespace csaug
