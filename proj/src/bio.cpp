#include "csaug/bio.hpp"

#include <algorithm>
#include <cctype>

namespace csaug {

namespace {

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::optional<Tag> parse_tag(std::string_view label) {
  if (label == "O") return Tag{};
  if (label.size() < 3 || label[1] != '-') return std::nullopt;
  TagKind kind;
  switch (label[0]) {
    case 'B': kind = TagKind::Begin; break;
    case 'I': kind = TagKind::Inside; break;
    default: return std::nullopt;
  }
  const auto type = label.substr(2);
  if (has_whitespace(type)) return std::nullopt;
  return Tag{kind, std::string(type)};
}

std::string format_tag(const Tag& tag) {
  switch (tag.kind) {
    case TagKind::Begin: return begin_tag(tag.type);
    case TagKind::Inside: return inside_tag(tag.type);
    case TagKind::Outside: break;
  }
  return "O";
}

std::optional<std::size_t> first_malformed_label(std::span<const std::string> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!parse_tag(labels[i])) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> first_illegal_transition(std::span<const std::string> labels) {
  std::optional<Tag> prev;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto tag = parse_tag(labels[i]);
    if (tag && tag->kind == TagKind::Inside) {
      const bool continues = prev && prev->kind != TagKind::Outside && prev->type == tag->type;
      if (!continues) return i;
    }
    prev = std::move(tag);
  }
  return std::nullopt;
}

std::size_t repair_transitions(std::vector<std::string>& labels) {
  std::size_t changed = 0;
  std::optional<Tag> prev;
  for (auto& label : labels) {
    auto tag = parse_tag(label);
    if (tag && tag->kind == TagKind::Inside &&
        !(prev && prev->kind != TagKind::Outside && prev->type == tag->type)) {
      label[0] = 'B';
      tag->kind = TagKind::Begin;
      ++changed;
    }
    prev = std::move(tag);
  }
  return changed;
}

}  // namespace csaug
