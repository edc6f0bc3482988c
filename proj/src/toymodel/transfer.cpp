#include "csaug/toymodel/transfer.hpp"

namespace csaug::toy {

TransferSummary run_transfer_experiment(const TransferExperimentConfig& cfg) {
  TransferSummary summary;
  for (const auto seed : cfg.seeds) {
    auto spec = cfg.corpus;
    spec.seed = seed;
    const auto corpus = generate_synthetic(spec);
    const auto& source = corpus.source_language();
    const auto& train_set = corpus.dataset(Split::Train, source);
    const auto provider = corpus.lexicon_provider();

    auto training = cfg.training;
    training.seed = seed;
    auto baseline = make_model(train_set);
    toy::train(baseline, train_set, training);

    std::vector<std::string> targets;
    if (cfg.targets) {
      targets = *cfg.targets;
    } else {
      targets.assign(corpus.languages.begin() + 1, corpus.languages.end());
    }

    for (const auto& target : targets) {
      AugmentationConfig aug;
      aug.level = cfg.level;
      aug.k = cfg.k;
      aug.excluded_languages = {target};
      aug.include_original = true;
      aug.seed = seed;
      const auto augmented = augment_dataset(train_set, aug, provider).dataset;

      auto switched = make_model(augmented);
      toy::train(switched, augmented, training);

      const auto& test_set = corpus.dataset(Split::Test, target);
      const auto base_report = evaluate(baseline, test_set);
      const auto cs_report = evaluate(switched, test_set);
      summary.runs.push_back({seed, target, base_report.intent_accuracy, cs_report.intent_accuracy,
                              base_report.slot_f1(), cs_report.slot_f1()});
    }
  }
  if (!summary.runs.empty()) {
    const auto n = static_cast<double>(summary.runs.size());
    for (const auto& r : summary.runs) {
      summary.mean_baseline_intent += r.baseline_intent_accuracy / n;
      summary.mean_switched_intent += r.switched_intent_accuracy / n;
      summary.mean_baseline_slot_f1 += r.baseline_slot_f1 / n;
      summary.mean_switched_slot_f1 += r.switched_slot_f1 / n;
    }
  }
  return summary;
}

}  // namespace csaug::toy
