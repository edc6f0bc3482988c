#include "csaug/align.hpp"

#include "csaug/bio.hpp"
#include "csaug/error.hpp"

namespace csaug {

AlignedChunk align_label(const Chunk& chunk, const TranslationResult& translation, std::string_view language) {
  if (translation.tokens.empty()) {
    throw Error(ErrorCode::EmptyTranslation, "empty translation for chunk " + std::to_string(chunk.start) +
                                                 ".." + std::to_string(chunk.end));
  }
  AlignedChunk out;
  out.tokens = translation.tokens;
  out.source_span = {chunk.start, chunk.end};
  out.language = std::string(language);
  out.slot_labels.reserve(out.tokens.size());
  for (std::size_t i = 0; i < out.tokens.size(); ++i) {
    if (!chunk.slot_type) {
      out.slot_labels.emplace_back("O");
    } else {
      out.slot_labels.push_back(i == 0 ? begin_tag(*chunk.slot_type) : inside_tag(*chunk.slot_type));
    }
  }
  return out;
}

}  // namespace csaug
