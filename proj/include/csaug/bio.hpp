#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csaug {

enum class TagKind { Outside, Begin, Inside };

/// One parsed BIO label. `type` is empty for Outside.
struct Tag {
  TagKind kind = TagKind::Outside;
  std::string type;

  bool operator==(const Tag&) const = default;
};

// Grammar: `O | B-<type> | I-<type>`, type non-empty and whitespace-free.
std::optional<Tag> parse_tag(std::string_view label);
std::string format_tag(const Tag& tag);

inline std::string begin_tag(std::string_view type) { return "B-" + std::string(type); }
inline std::string inside_tag(std::string_view type) { return "I-" + std::string(type); }

/// Index of the first label that breaks the grammar, if any.
std::optional<std::size_t> first_malformed_label(std::span<const std::string> labels);

/// Index of the first `I-x` not preceded by `B-x` or `I-x`. Labels must
/// already satisfy the grammar.
std::optional<std::size_t> first_illegal_transition(std::span<const std::string> labels);

/// Rewrites every illegal `I-x` to `B-x`. Returns the number of labels changed.
std::size_t repair_transitions(std::vector<std::string>& labels);

}  // namespace csaug
