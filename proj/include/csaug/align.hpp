#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csaug/chunker.hpp"
#include "csaug/translate.hpp"

namespace csaug {

/// Translated counterpart of one source chunk with recreated slot labels.
struct AlignedChunk {
  std::vector<std::string> tokens;
  std::vector<std::string> slot_labels;
  std::pair<std::size_t, std::size_t> source_span;
  std::string language;

  bool operator==(const AlignedChunk&) const = default;
};

/// Direct alignment: an O-chunk maps to all-O, a slot chunk of type x maps
/// to `B-x I-x ... I-x` over the translated tokens. Only token count and slot
/// type matter. Throws EmptyTranslation when `translation.tokens` is empty.
AlignedChunk align_label(const Chunk& chunk, const TranslationResult& translation, std::string_view language);

/// Seam for alternative label-projection strategies.
using AlignmentStrategy =
    std::function<AlignedChunk(const Chunk&, const TranslationResult&, std::string_view)>;

inline AlignmentStrategy direct_alignment() { return &align_label; }

}  // namespace csaug
