#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "csaug/corpus.hpp"

namespace csaug {

/// A labelled slot span [start, end) of one type.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  auto operator<=>(const Span&) const = default;
};

/// Spans of a label sequence, read leniently as conlleval does: an `I-x`
/// that does not continue an `x` span opens a new one, malformed labels are O.
std::vector<Span> extract_spans(std::span<const std::string> labels);

struct MatchCounts {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;

  double precision() const;
  double recall() const;
  /// 1.0 when there is nothing to find and nothing was predicted.
  double f1() const;

  MatchCounts& operator+=(const MatchCounts& o);
};

/// Exact (boundary + type) span matching for one sentence.
MatchCounts match_spans(std::span<const std::string> gold, std::span<const std::string> predicted);

struct Prediction {
  std::string intent;
  std::vector<std::string> slot_labels;
};

struct IntentTally {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct EvaluationReport {
  double intent_accuracy = 0.0;
  /// Span-level micro F1.
  MatchCounts slot_spans;
  /// Token-level micro F1 over non-O gold/predicted tags.
  MatchCounts slot_tokens;
  std::map<std::string, IntentTally> per_intent;
  std::map<std::string, MatchCounts> per_slot_type;

  double slot_f1() const { return slot_spans.f1(); }
  double token_f1() const { return slot_tokens.f1(); }
};

/// Scores predictions aligned one-to-one with `gold.utterances`.
EvaluationReport score_predictions(const Dataset& gold, std::span<const Prediction> predictions);

}  // namespace csaug
