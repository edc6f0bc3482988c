#include "csaug/chunker.hpp"

#include "csaug/bio.hpp"
#include "csaug/error.hpp"

namespace csaug {

std::string Chunk::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<Chunk> slot_chunks(std::span<const std::string> tokens,
                               std::span<const std::string> slot_labels) {
  if (tokens.size() != slot_labels.size()) {
    throw Error(ErrorCode::MalformedRecord, "token/label length mismatch");
  }
  if (auto bad = first_malformed_label(slot_labels)) {
    throw Error(ErrorCode::MalformedRecord,
                "malformed slot label '" + slot_labels[*bad] + "' at token " + std::to_string(*bad));
  }
  if (auto bad = first_illegal_transition(slot_labels)) {
    throw Error(ErrorCode::IllegalBioTransition,
                "'" + slot_labels[*bad] + "' at token " + std::to_string(*bad) +
                    " does not continue a slot of the same type");
  }

  std::vector<Chunk> chunks;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto tag = *parse_tag(slot_labels[i]);
    const bool extends =
        !chunks.empty() &&
        ((tag.kind == TagKind::Outside && !chunks.back().is_slot()) ||
         tag.kind == TagKind::Inside);
    if (!extends) {
      Chunk c;
      c.start = i;
      c.end = i;
      if (tag.kind != TagKind::Outside) c.slot_type = tag.type;
      chunks.push_back(std::move(c));
    }
    chunks.back().tokens.push_back(tokens[i]);
    chunks.back().end = i + 1;
  }
  return chunks;
}

LabelledTokens reassemble(std::span<const Chunk> chunks) {
  LabelledTokens out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto& c = chunks[i];
    if (c.end <= c.start || c.tokens.size() != c.size()) {
      throw Error(ErrorCode::NonContiguousChunks,
                  "chunk " + std::to_string(i) + " span does not match its token count");
    }
    const std::size_t expected = i == 0 ? 0 : chunks[i - 1].end;
    if (c.start != expected) {
      throw Error(ErrorCode::NonContiguousChunks, "chunk " + std::to_string(i) + " starts at " +
                                                      std::to_string(c.start) + ", expected " +
                                                      std::to_string(expected));
    }
    for (std::size_t j = 0; j < c.tokens.size(); ++j) {
      out.tokens.push_back(c.tokens[j]);
      if (!c.slot_type) {
        out.slot_labels.emplace_back("O");
      } else {
        out.slot_labels.push_back(j == 0 ? begin_tag(*c.slot_type) : inside_tag(*c.slot_type));
      }
    }
  }
  return out;
}

}  // namespace csaug
