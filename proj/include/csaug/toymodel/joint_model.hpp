#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "csaug/corpus.hpp"
#include "csaug/error.hpp"
#include "csaug/metrics.hpp"
#include "csaug/rng.hpp"
#include "csaug/toymodel/features.hpp"

namespace csaug::toy {

/// Intent and slot-tag vocabularies; their order fixes the row order of the
/// model's weight matrices.
class LabelInventory {
 public:
  LabelInventory() = default;
  LabelInventory(std::vector<std::string> intents, std::vector<std::string> tags);

  /// Sorted distinct intents and tags of `ds`; "O" is always a tag.
  static LabelInventory from_dataset(const Dataset& ds);

  const std::vector<std::string>& intents() const { return intents_; }
  const std::vector<std::string>& tags() const { return tags_; }
  std::optional<Eigen::Index> intent_index(std::string_view intent) const;
  std::optional<Eigen::Index> tag_index(std::string_view tag) const;

  bool operator==(const LabelInventory& o) const { return intents_ == o.intents_ && tags_ == o.tags_; }

 private:
  std::vector<std::string> intents_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, Eigen::Index> intent_ids_;
  std::unordered_map<std::string, Eigen::Index> tag_ids_;
};

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Weights of the two linear heads: intent logits are
/// `intent_weights * pooled + intent_bias` (num_intents x dim) and per-token
/// tag logits are `slot_weights * context + slot_bias` (num_tags x 3*dim).
template <typename Scalar>
struct JointParameters {
  Matrix<Scalar> intent_weights;
  Vector<Scalar> intent_bias;
  Matrix<Scalar> slot_weights;
  Vector<Scalar> slot_bias;

  static JointParameters zeros(Eigen::Index intents, Eigen::Index tags, Eigen::Index dim) {
    return {Matrix<Scalar>::Zero(intents, dim), Vector<Scalar>::Zero(intents),
            Matrix<Scalar>::Zero(tags, 3 * dim), Vector<Scalar>::Zero(tags)};
  }

  bool all_finite() const {
    return intent_weights.allFinite() && intent_bias.allFinite() && slot_weights.allFinite() &&
           slot_bias.allFinite();
  }
};

template <typename Scalar>
class JointModel {
 public:
  using Parameters = JointParameters<Scalar>;

  /// Zero-initialised model.
  JointModel(FeatureExtractor features, LabelInventory labels)
      : features_(std::move(features)), labels_(std::move(labels)) {
    params_ = Parameters::zeros(num_intents(), num_tags(), static_cast<Eigen::Index>(features_.dim()));
  }

  /// Throws UnknownLabelInventory when the shapes disagree with the inventory.
  JointModel(FeatureExtractor features, LabelInventory labels, Parameters params)
      : features_(std::move(features)), labels_(std::move(labels)), params_(std::move(params)) {
    const auto d = static_cast<Eigen::Index>(features_.dim());
    const bool ok = params_.intent_weights.rows() == num_intents() && params_.intent_weights.cols() == d &&
                    params_.intent_bias.size() == num_intents() && params_.slot_weights.rows() == num_tags() &&
                    params_.slot_weights.cols() == 3 * d && params_.slot_bias.size() == num_tags();
    if (!ok) throw Error(ErrorCode::UnknownLabelInventory, "weight shapes do not match the label inventory");
  }

  const FeatureExtractor& features() const { return features_; }
  const LabelInventory& labels() const { return labels_; }
  const Parameters& parameters() const { return params_; }
  Parameters& parameters() { return params_; }

  Eigen::Index num_intents() const { return static_cast<Eigen::Index>(labels_.intents().size()); }
  Eigen::Index num_tags() const { return static_cast<Eigen::Index>(labels_.tags().size()); }

 private:
  FeatureExtractor features_;
  LabelInventory labels_;
  Parameters params_;
};

using ToyJointModel = JointModel<double>;

// ---------------------------------------------------------------------------
// Encoding and forward pass

/// Features and label ids of one utterance. Label ids are empty when the
/// label is outside the model's inventory.
template <typename Scalar>
struct EncodedUtterance {
  SparseVector<Scalar> pooled;
  std::vector<SparseVector<Scalar>> contexts;
  std::optional<Eigen::Index> intent;
  std::vector<std::optional<Eigen::Index>> tags;
};

template <typename Scalar>
EncodedUtterance<Scalar> encode(const JointModel<Scalar>& model, const Utterance& u) {
  const auto& fx = model.features();
  std::vector<SparseVector<Scalar>> tokens;
  tokens.reserve(u.tokens.size());
  for (const auto& t : u.tokens) tokens.push_back(fx.template token_vector<Scalar>(t));
  EncodedUtterance<Scalar> e;
  e.pooled = fx.template pooled<Scalar>(tokens);
  e.contexts = fx.template contexts<Scalar>(tokens);
  e.intent = model.labels().intent_index(u.intent);
  e.tags.reserve(u.slot_labels.size());
  for (const auto& l : u.slot_labels) e.tags.push_back(model.labels().tag_index(l));
  return e;
}

template <typename Scalar>
std::vector<EncodedUtterance<Scalar>> encode(const JointModel<Scalar>& model, const Dataset& ds) {
  std::vector<EncodedUtterance<Scalar>> out;
  out.reserve(ds.size());
  for (const auto& u : ds.utterances) out.push_back(encode(model, u));
  return out;
}

/// `bias + weights * x` for sparse x.
template <typename Scalar>
Vector<Scalar> affine(const Matrix<Scalar>& weights, const Vector<Scalar>& bias, const SparseVector<Scalar>& x) {
  Vector<Scalar> z = bias;
  for (typename SparseVector<Scalar>::InnerIterator it(x); it; ++it) z += weights.col(it.index()) * it.value();
  return z;
}

/// Numerically stable softmax.
template <typename Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& logits) {
  const auto m = logits.maxCoeff();
  return m + std::log((logits.array() - m).exp().sum());
}

template <typename Scalar>
struct Distributions {
  /// Probability per intent.
  Vector<Scalar> intent;
  /// One column of tag probabilities per token.
  Matrix<Scalar> slots;
};

template <typename Scalar>
Distributions<Scalar> predict(const JointModel<Scalar>& model, const EncodedUtterance<Scalar>& e) {
  const auto& p = model.parameters();
  Distributions<Scalar> out;
  out.intent = softmax(affine(p.intent_weights, p.intent_bias, e.pooled));
  out.slots.resize(model.num_tags(), static_cast<Eigen::Index>(e.contexts.size()));
  for (std::size_t m = 0; m < e.contexts.size(); ++m) {
    out.slots.col(static_cast<Eigen::Index>(m)) = softmax(affine(p.slot_weights, p.slot_bias, e.contexts[m]));
  }
  return out;
}

template <typename Scalar>
Distributions<Scalar> predict(const JointModel<Scalar>& model, const Utterance& u) {
  return predict(model, encode(model, u));
}

/// Argmax intent and per-token tags.
template <typename Scalar>
Prediction predict_labels(const JointModel<Scalar>& model, const Utterance& u) {
  const auto dist = predict(model, u);
  Prediction out;
  Eigen::Index best;
  dist.intent.maxCoeff(&best);
  out.intent = model.labels().intents()[static_cast<std::size_t>(best)];
  for (Eigen::Index m = 0; m < dist.slots.cols(); ++m) {
    dist.slots.col(m).maxCoeff(&best);
    out.slot_labels.push_back(model.labels().tags()[static_cast<std::size_t>(best)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Joint loss

struct JointTrainingConfig {
  /// Intent loss weight.
  double alpha = 1.0;
  /// Slot loss weight.
  double beta = 0.6;
  double learning_rate = 5.0;
  std::size_t epochs = 50;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1;
  /// Epochs without dev-loss improvement before stopping (dev set only).
  std::size_t patience = 5;

  void validate() const {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || alpha + beta <= 0.0) {
      throw Error(ErrorCode::ConfigurationError, "task weights must be non-negative with alpha + beta > 0");
    }
    if (!(learning_rate >= 0.0) || batch_size == 0) {
      throw Error(ErrorCode::ConfigurationError, "learning rate must be >= 0 and batch size positive");
    }
  }
};

template <typename Scalar>
struct LossBreakdown {
  Scalar total = 0;
  Scalar intent = 0;
  Scalar slot = 0;
};

/// Gradient of the joint loss. Tracks which weight columns were written so
/// that clearing and applying stay proportional to the batch's sparsity.
template <typename Scalar>
struct JointGradient {
  JointParameters<Scalar> values;
  std::vector<Eigen::Index> intent_columns;
  std::vector<Eigen::Index> slot_columns;

  explicit JointGradient(const JointModel<Scalar>& model)
      : values(JointParameters<Scalar>::zeros(model.num_intents(), model.num_tags(),
                                              static_cast<Eigen::Index>(model.features().dim()))),
        intent_mark_(static_cast<std::size_t>(values.intent_weights.cols()), 0),
        slot_mark_(static_cast<std::size_t>(values.slot_weights.cols()), 0) {}

  void add_intent(const Vector<Scalar>& g, const SparseVector<Scalar>& x) {
    values.intent_bias += g;
    for (typename SparseVector<Scalar>::InnerIterator it(x); it; ++it) {
      touch(intent_mark_, intent_columns, it.index());
      values.intent_weights.col(it.index()) += g * it.value();
    }
  }

  void add_slot(const Vector<Scalar>& g, const SparseVector<Scalar>& x) {
    values.slot_bias += g;
    for (typename SparseVector<Scalar>::InnerIterator it(x); it; ++it) {
      touch(slot_mark_, slot_columns, it.index());
      values.slot_weights.col(it.index()) += g * it.value();
    }
  }

  void clear() {
    for (auto c : intent_columns) {
      values.intent_weights.col(c).setZero();
      intent_mark_[static_cast<std::size_t>(c)] = 0;
    }
    for (auto c : slot_columns) {
      values.slot_weights.col(c).setZero();
      slot_mark_[static_cast<std::size_t>(c)] = 0;
    }
    intent_columns.clear();
    slot_columns.clear();
    values.intent_bias.setZero();
    values.slot_bias.setZero();
  }

  /// params -= step * gradient
  void apply(JointParameters<Scalar>& params, Scalar step) const {
    for (auto c : intent_columns) params.intent_weights.col(c) -= step * values.intent_weights.col(c);
    for (auto c : slot_columns) params.slot_weights.col(c) -= step * values.slot_weights.col(c);
    params.intent_bias -= step * values.intent_bias;
    params.slot_bias -= step * values.slot_bias;
  }

 private:
  static void touch(std::vector<char>& mark, std::vector<Eigen::Index>& cols, Eigen::Index c) {
    auto& m = mark[static_cast<std::size_t>(c)];
    if (!m) {
      m = 1;
      cols.push_back(c);
    }
  }

  std::vector<char> intent_mark_;
  std::vector<char> slot_mark_;
};

/// L = alpha * L_intent + beta * L_slot, where L_intent is the mean intent
/// cross-entropy over utterances and L_slot the mean tag cross-entropy over
/// all tokens of the selected examples. `indices` selects examples from
/// `batch`; empty means all. Accumulates into `gradient` when given.
template <typename Scalar>
LossBreakdown<Scalar> joint_loss(const JointModel<Scalar>& model, std::span<const EncodedUtterance<Scalar>> batch,
                                 const JointTrainingConfig& cfg, JointGradient<Scalar>* gradient = nullptr,
                                 std::span<const std::size_t> indices = {}) {
  const std::size_t count = indices.empty() ? batch.size() : indices.size();
  if (count == 0) throw Error(ErrorCode::EmptyBatch, "joint loss over an empty batch");
  auto example = [&](std::size_t i) -> const EncodedUtterance<Scalar>& {
    return batch[indices.empty() ? i : indices[i]];
  };

  std::size_t token_count = 0;
  for (std::size_t i = 0; i < count; ++i) token_count += example(i).contexts.size();

  const auto& p = model.parameters();
  const Scalar alpha = static_cast<Scalar>(cfg.alpha);
  const Scalar beta = static_cast<Scalar>(cfg.beta);
  const Scalar intent_scale = alpha / static_cast<Scalar>(count);
  const Scalar slot_scale = token_count ? beta / static_cast<Scalar>(token_count) : Scalar(0);

  LossBreakdown<Scalar> loss;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& e = example(i);
    if (!e.intent) throw Error(ErrorCode::UnknownLabelInventory, "intent outside the model's inventory");
    const auto z = affine(p.intent_weights, p.intent_bias, e.pooled);
    loss.intent += log_sum_exp(z) - z(*e.intent);
    if (gradient && alpha != Scalar(0)) {
      Vector<Scalar> g = softmax(z);
      g(*e.intent) -= Scalar(1);
      gradient->add_intent(g * intent_scale, e.pooled);
    }
    for (std::size_t m = 0; m < e.contexts.size(); ++m) {
      const auto tag = e.tags[m];
      if (!tag) throw Error(ErrorCode::UnknownLabelInventory, "slot tag outside the model's inventory");
      const auto zs = affine(p.slot_weights, p.slot_bias, e.contexts[m]);
      loss.slot += log_sum_exp(zs) - zs(*tag);
      if (gradient && beta != Scalar(0)) {
        Vector<Scalar> g = softmax(zs);
        g(*tag) -= Scalar(1);
        gradient->add_slot(g * slot_scale, e.contexts[m]);
      }
    }
  }
  loss.intent /= static_cast<Scalar>(count);
  if (token_count) loss.slot /= static_cast<Scalar>(token_count);
  loss.total = alpha * loss.intent + beta * loss.slot;
  return loss;
}

// ---------------------------------------------------------------------------
// Training and evaluation

struct TrainingHistory {
  /// Full-data joint loss before training (index 0) and after each epoch.
  std::vector<double> train_loss;
  /// Same for the dev set, when one was given.
  std::vector<double> dev_loss;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

/// Mini-batch gradient descent on the joint loss. With a dev set, training
/// stops after `patience` epochs without dev-loss improvement and the best
/// weights are restored. Throws EmptyBatch on an empty dataset and
/// DivergenceDetected when the loss stops being finite.
template <typename Scalar>
TrainingHistory train(JointModel<Scalar>& model, const Dataset& ds, const JointTrainingConfig& cfg,
                      const Dataset* dev = nullptr) {
  cfg.validate();
  if (ds.empty()) throw Error(ErrorCode::EmptyBatch, "cannot train on an empty dataset");
  const auto data = encode(model, ds);
  const auto dev_data = dev && !dev->empty() ? encode(model, *dev) : std::vector<EncodedUtterance<Scalar>>{};
  const std::span<const EncodedUtterance<Scalar>> all(data);

  TrainingHistory history;
  auto record = [&](std::size_t epoch) {
    const double loss = static_cast<double>(joint_loss(model, all, cfg).total);
    if (!std::isfinite(loss) || !model.parameters().all_finite()) {
      throw Error(ErrorCode::DivergenceDetected, "training diverged at epoch " + std::to_string(epoch));
    }
    history.train_loss.push_back(loss);
    if (!dev_data.empty()) {
      history.dev_loss.push_back(static_cast<double>(
          joint_loss(model, std::span<const EncodedUtterance<Scalar>>(dev_data), cfg).total));
    }
  };
  record(0);

  auto best = model.parameters();
  double best_dev = history.dev_loss.empty() ? 0.0 : history.dev_loss.front();
  std::size_t since_best = 0;

  JointGradient<Scalar> gradient(model);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.seed);
  const auto step = static_cast<Scalar>(cfg.learning_rate);

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto len = std::min(cfg.batch_size, order.size() - start);
      gradient.clear();
      joint_loss(model, all, cfg, &gradient, std::span<const std::size_t>(order).subspan(start, len));
      gradient.apply(model.parameters(), step);
    }
    record(epoch);

    if (!dev_data.empty()) {
      if (history.dev_loss.back() < best_dev) {
        best_dev = history.dev_loss.back();
        best = model.parameters();
        history.best_epoch = epoch;
        since_best = 0;
      } else if (++since_best >= cfg.patience) {
        history.stopped_early = true;
        break;
      }
    } else {
      history.best_epoch = epoch;
    }
  }
  if (!dev_data.empty()) model.parameters() = std::move(best);
  return history;
}

template <typename Scalar>
EvaluationReport evaluate(const JointModel<Scalar>& model, const Dataset& ds) {
  std::vector<Prediction> predictions;
  predictions.reserve(ds.size());
  for (const auto& u : ds.utterances) predictions.push_back(predict_labels(model, u));
  return score_predictions(ds, predictions);
}

/// Model with inventories taken from `ds`.
template <typename Scalar = double>
JointModel<Scalar> make_model(const Dataset& ds, FeatureExtractor features = FeatureExtractor{}) {
  return JointModel<Scalar>(std::move(features), LabelInventory::from_dataset(ds));
}

}  // namespace csaug::toy
