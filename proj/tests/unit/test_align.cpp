#include "csaug/align.hpp"

#include "csaug/bio.hpp"
#include "doctest.h"
#include "testing.hpp"

using namespace csaug;

namespace {

TranslationResult result_of(std::vector<std::string> tokens) {
  TranslationResult r;
  for (const auto& t : tokens) r.text += (r.text.empty() ? "" : " ") + t;
  r.tokens = std::move(tokens);
  return r;
}

}  // namespace

TEST_CASE("slot chunk gets one B and I for the rest") {
  const Chunk city{{"new", "york"}, "city", 3, 5};
  const auto a = align_label(city, result_of({"nueva", "york", "ciudad"}), "es");
  CHECK(a.slot_labels == std::vector<std::string>{"B-city", "I-city", "I-city"});
  CHECK(a.tokens == std::vector<std::string>{"nueva", "york", "ciudad"});
  CHECK(a.source_span == std::pair<std::size_t, std::size_t>{3, 5});
  CHECK(a.language == "es");
}

TEST_CASE("O chunk stays O; single-token slot is just B") {
  const Chunk o{{"to"}, std::nullopt, 0, 1};
  CHECK(align_label(o, result_of({"a", "la"}), "es").slot_labels == std::vector<std::string>{"O", "O"});
  const Chunk code{{"ua"}, "code", 0, 1};
  CHECK(align_label(code, result_of({"UA"}), "de").slot_labels == std::vector<std::string>{"B-code"});
}

TEST_CASE("empty translation is an error") {
  const Chunk c{{"x"}, "a", 0, 1};
  try {
    align_label(c, TranslationResult{}, "de");
    FAIL("expected EmptyTranslation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTranslation);
  }
}

TEST_CASE("labels depend only on counts and slot type, never on surface forms") {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto len = 1 + uniform_index(rng, 6);
    std::vector<std::string> a, b;
    for (std::size_t i = 0; i < len; ++i) {
      a.push_back("a" + std::to_string(rng() % 1000));
      b.push_back("b" + std::to_string(rng() % 1000));
    }
    const Chunk c{{"src"}, uniform_index(rng, 2) ? std::optional<std::string>("t") : std::nullopt, 0, 1};
    CHECK(align_label(c, result_of(a), "x").slot_labels == align_label(c, result_of(b), "y").slot_labels);
  }
}

TEST_CASE("reassembled aligned chunks are strict BIO and preserve the slot-type multiset") {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto u = csaug::testing::random_utterance(rng, "u");
    std::multiset<std::string> source_types, output_types;
    std::vector<std::string> labels;
    for (const auto& c : slot_chunks(u)) {
      if (c.slot_type) source_types.insert(*c.slot_type);
      std::vector<std::string> tokens(1 + uniform_index(rng, 4), "tok");
      const auto aligned = align_label(c, result_of(tokens), "x");
      REQUIRE(aligned.slot_labels.size() == tokens.size());
      labels.insert(labels.end(), aligned.slot_labels.begin(), aligned.slot_labels.end());
    }
    CHECK_FALSE(first_illegal_transition(labels));
    CHECK_FALSE(first_malformed_label(labels));
    for (const auto& l : labels) {
      if (l.starts_with("B-")) output_types.insert(l.substr(2));
    }
    CHECK(output_types == source_types);
  }
}
