#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csaug/align.hpp"
#include "csaug/chunker.hpp"
#include "csaug/corpus.hpp"
#include "csaug/error.hpp"
#include "csaug/rng.hpp"
#include "csaug/translate.hpp"

namespace csaug {

enum class SwitchLevel { Chunk, Word, Sentence };

std::string_view to_string(SwitchLevel level);
SwitchLevel parse_level(std::string_view name);

struct AugmentationConfig {
  SwitchLevel level = SwitchLevel::Chunk;
  /// Code-switched copies per source utterance.
  std::size_t k = 5;
  /// Sampling pool. Empty means "every language the provider supports".
  std::set<std::string> allowed_languages;
  /// Never sampled (the evaluation targets).
  std::set<std::string> excluded_languages;
  /// When set, replaces allowed_languages with the family's members.
  std::optional<std::string> family;
  bool include_original = true;
  std::uint64_t seed = 0;
};

/// The sampling pool: (family members | allowed | provider languages) minus
/// exclusions, sorted. Throws ConfigurationError when empty and
/// UnsupportedLanguage when a pooled language (other than `source_lang`) is
/// not offered by `provider`. Pass a null provider to skip the support check;
/// the pool must then come from the family or allowed set.
std::vector<std::string> resolve_languages(const AugmentationConfig& cfg, const TranslationProvider* provider,
                                           std::string_view source_lang);

/// One translation call in a plan: tokens [start, end) of chunk
/// `chunk_index`, sent to `language`.
struct PlannedUnit {
  std::size_t chunk_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string language;
};

struct SwitchPlan {
  std::vector<Chunk> chunks;
  std::vector<PlannedUnit> units;
};

/// Draws the languages for one code-switched copy. Chunk level: one draw per
/// chunk. Word level: one draw per token. Sentence level: a single draw
/// shared by all chunks. Consumes randomness only, never calls a provider.
SwitchPlan plan_switch(const Utterance& u, SwitchLevel level, std::span<const std::string> languages, Rng& rng);

/// Audit trail for one translation unit.
struct SwitchedSegment {
  std::pair<std::size_t, std::size_t> source_span;
  std::optional<std::string> slot_type;
  std::string language;
  Provenance provenance = Provenance::Lexicon;
  std::string source_text;
  std::string text;
};

struct CodeSwitchedUtterance {
  std::string id;
  std::string source_id;
  std::size_t repetition = 0;
  std::vector<std::string> tokens;
  std::vector<std::string> slot_labels;
  std::string intent;
  /// One language per translation unit, in sentence order.
  std::vector<std::string> chunk_languages;
  std::vector<SwitchedSegment> segments;

  Utterance to_utterance() const { return {id, tokens, slot_labels, intent}; }
};

/// Executes a plan: translates every unit (units in `source_lang` pass through
/// unchanged), aligns labels per source chunk and reassembles the sentence.
/// Errors are rethrown with the utterance id and chunk span attached.
CodeSwitchedUtterance realize_switch(const Utterance& u, const SwitchPlan& plan,
                                     const TranslationProvider& provider, std::string_view source_lang,
                                     std::size_t repetition = 1,
                                     const AlignmentStrategy& aligner = direct_alignment());

/// Plan + realize for a single copy.
CodeSwitchedUtterance code_switch_utterance(const Utterance& u, const AugmentationConfig& cfg,
                                            const TranslationProvider& provider, Rng& rng,
                                            std::string_view source_lang = "en", std::size_t repetition = 1);

// ---------------------------------------------------------------------------

struct AugmentOptions {
  std::size_t workers = 1;
  AlignmentStrategy aligner = direct_alignment();
};

struct AugmentationOutput {
  Dataset dataset;
  /// One record per code-switched copy, in output order.
  std::vector<CodeSwitchedUtterance> records;
};

struct UtteranceFailure {
  std::string utterance_id;
  std::size_t repetition = 0;
  ErrorCode code = ErrorCode::AugmentationFailed;
  std::string message;
};

/// Raised when any copy fails; nothing is returned in that case.
class AugmentationError : public Error {
 public:
  explicit AugmentationError(std::vector<UtteranceFailure> failures);

  const std::vector<UtteranceFailure>& failures() const { return failures_; }
  bool any_provider_failure() const;

 private:
  std::vector<UtteranceFailure> failures_;
};

/// Produces k copies per utterance (plus the originals first when
/// include_original), copies of utterance 1 before those of utterance 2.
/// Copy j of utterance i draws from the stream derive_seed(seed, i, j), so
/// the output does not depend on the worker count.
AugmentationOutput augment_dataset(const Dataset& ds, const AugmentationConfig& cfg,
                                   const TranslationProvider& provider, const AugmentOptions& options = {});

/// Sampling-only counterpart of augment_dataset for cost estimates: one plan
/// per code-switched copy, same order and randomness as a real run.
std::vector<std::pair<std::string, SwitchPlan>> plan_dataset(const Dataset& ds, const AugmentationConfig& cfg,
                                                             std::span<const std::string> languages);

/// One JSON object (single line, no trailing newline) describing a copy.
std::string audit_line(const CodeSwitchedUtterance& record, SwitchLevel level);

}  // namespace csaug
