#include "csaug/metrics.hpp"

#include <algorithm>

#include "csaug/bio.hpp"
#include "csaug/error.hpp"

namespace csaug {

std::vector<Span> extract_spans(std::span<const std::string> labels) {
  std::vector<Span> spans;
  bool open = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto tag = parse_tag(labels[i]).value_or(Tag{});
    const bool continues = open && tag.kind == TagKind::Inside && spans.back().type == tag.type;
    if (continues) {
      spans.back().end = i + 1;
      continue;
    }
    open = tag.kind != TagKind::Outside;
    if (open) spans.push_back({i, i + 1, tag.type});
  }
  return spans;
}

double MatchCounts::precision() const {
  const auto predicted = true_positives + false_positives;
  if (predicted == 0) return false_negatives == 0 ? 1.0 : 0.0;
  return static_cast<double>(true_positives) / static_cast<double>(predicted);
}

double MatchCounts::recall() const {
  const auto gold = true_positives + false_negatives;
  if (gold == 0) return false_positives == 0 ? 1.0 : 0.0;
  return static_cast<double>(true_positives) / static_cast<double>(gold);
}

double MatchCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

MatchCounts& MatchCounts::operator+=(const MatchCounts& o) {
  true_positives += o.true_positives;
  false_positives += o.false_positives;
  false_negatives += o.false_negatives;
  return *this;
}

MatchCounts match_spans(std::span<const std::string> gold, std::span<const std::string> predicted) {
  auto g = extract_spans(gold);
  auto p = extract_spans(predicted);
  std::sort(g.begin(), g.end());
  std::sort(p.begin(), p.end());
  std::vector<Span> common;
  std::set_intersection(g.begin(), g.end(), p.begin(), p.end(), std::back_inserter(common));
  return {common.size(), p.size() - common.size(), g.size() - common.size()};
}

EvaluationReport score_predictions(const Dataset& gold, std::span<const Prediction> predictions) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::MalformedRecord, "prediction count does not match dataset size");
  }
  EvaluationReport report;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& u = gold.utterances[i];
    const auto& pred = predictions[i];
    if (pred.slot_labels.size() != u.slot_labels.size()) {
      throw Error(ErrorCode::MalformedRecord, "prediction for " + u.id + " has the wrong number of tags");
    }
    auto& tally = report.per_intent[u.intent];
    ++tally.total;
    if (pred.intent == u.intent) {
      ++tally.correct;
      ++correct;
    }

    report.slot_spans += match_spans(u.slot_labels, pred.slot_labels);

    auto g = extract_spans(u.slot_labels);
    auto p = extract_spans(pred.slot_labels);
    std::sort(g.begin(), g.end());
    std::sort(p.begin(), p.end());
    for (const auto& s : g) {
      auto& counts = report.per_slot_type[s.type];
      std::binary_search(p.begin(), p.end(), s) ? ++counts.true_positives : ++counts.false_negatives;
    }
    for (const auto& s : p) {
      if (!std::binary_search(g.begin(), g.end(), s)) ++report.per_slot_type[s.type].false_positives;
    }

    for (std::size_t t = 0; t < u.slot_labels.size(); ++t) {
      const bool gold_slot = u.slot_labels[t] != "O";
      const bool pred_slot = pred.slot_labels[t] != "O";
      if (gold_slot && pred.slot_labels[t] == u.slot_labels[t]) {
        ++report.slot_tokens.true_positives;
        continue;
      }
      if (pred_slot) ++report.slot_tokens.false_positives;
      if (gold_slot) ++report.slot_tokens.false_negatives;
    }
  }
  report.intent_accuracy = gold.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
  return report;
}

}  // namespace csaug
