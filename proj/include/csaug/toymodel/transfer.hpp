#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csaug/augment.hpp"
#include "csaug/toymodel/joint_model.hpp"
#include "csaug/toymodel/synthetic.hpp"

namespace csaug::toy {

/// Zero-shot transfer comparison on synthetic corpora: a model trained on the
/// source language alone versus one trained on source data plus chunk-level
/// code-switched copies that never use the evaluation target.
struct TransferExperimentConfig {
  SyntheticCorpusSpec corpus;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::size_t k = 5;
  SwitchLevel level = SwitchLevel::Chunk;
  JointTrainingConfig training;
  /// Evaluation targets; defaults to every non-source language.
  std::optional<std::vector<std::string>> targets;
};

struct TransferRun {
  std::uint64_t seed = 0;
  std::string target;
  double baseline_intent_accuracy = 0.0;
  double switched_intent_accuracy = 0.0;
  double baseline_slot_f1 = 0.0;
  double switched_slot_f1 = 0.0;
};

struct TransferSummary {
  std::vector<TransferRun> runs;
  double mean_baseline_intent = 0.0;
  double mean_switched_intent = 0.0;
  double mean_baseline_slot_f1 = 0.0;
  double mean_switched_slot_f1 = 0.0;

  /// Switched minus baseline mean intent accuracy.
  double intent_margin() const { return mean_switched_intent - mean_baseline_intent; }
};

TransferSummary run_transfer_experiment(const TransferExperimentConfig& cfg);

}  // namespace csaug::toy
