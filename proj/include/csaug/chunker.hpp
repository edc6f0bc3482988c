#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csaug/corpus.hpp"

namespace csaug {

/// A contiguous token span with one slot identity: either a `B-x (I-x)*`
/// group (slot_type = x) or a maximal run of `O` tokens (no slot_type).
struct Chunk {
  std::vector<std::string> tokens;
  std::optional<std::string> slot_type;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool is_slot() const { return slot_type.has_value(); }
  /// Tokens joined with single spaces.
  std::string text() const;

  bool operator==(const Chunk&) const = default;
};

struct LabelledTokens {
  std::vector<std::string> tokens;
  std::vector<std::string> slot_labels;

  bool operator==(const LabelledTokens&) const = default;
};

/// Chunk decomposition of a BIO-labelled sentence. Chunks cover
/// [0, tokens.size()) in order. Throws IllegalBioTransition on labels that
/// fail strict validation.
std::vector<Chunk> slot_chunks(std::span<const std::string> tokens,
                               std::span<const std::string> slot_labels);

inline std::vector<Chunk> slot_chunks(const Utterance& u) {
  return slot_chunks(u.tokens, u.slot_labels);
}

/// Inverse of slot_chunks. Throws NonContiguousChunks when a chunk does not
/// start where the previous one ended or its token count disagrees with its span.
LabelledTokens reassemble(std::span<const Chunk> chunks);

}  // namespace csaug
