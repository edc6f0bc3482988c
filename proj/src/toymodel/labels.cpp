#include <set>

#include "csaug/toymodel/joint_model.hpp"

namespace csaug::toy {

LabelInventory::LabelInventory(std::vector<std::string> intents, std::vector<std::string> tags)
    : intents_(std::move(intents)), tags_(std::move(tags)) {
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    if (!intent_ids_.emplace(intents_[i], static_cast<Eigen::Index>(i)).second) {
      throw Error(ErrorCode::UnknownLabelInventory, "duplicate intent '" + intents_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) {
    if (!tag_ids_.emplace(tags_[i], static_cast<Eigen::Index>(i)).second) {
      throw Error(ErrorCode::UnknownLabelInventory, "duplicate tag '" + tags_[i] + "'");
    }
  }
  if (intents_.empty() || tags_.empty()) {
    throw Error(ErrorCode::UnknownLabelInventory, "label inventory needs at least one intent and one tag");
  }
}

LabelInventory LabelInventory::from_dataset(const Dataset& ds) {
  std::set<std::string> intents;
  std::set<std::string> tags{"O"};
  for (const auto& u : ds.utterances) {
    intents.insert(u.intent);
    tags.insert(u.slot_labels.begin(), u.slot_labels.end());
  }
  return {{intents.begin(), intents.end()}, {tags.begin(), tags.end()}};
}

std::optional<Eigen::Index> LabelInventory::intent_index(std::string_view intent) const {
  if (auto it = intent_ids_.find(std::string(intent)); it != intent_ids_.end()) return it->second;
  return std::nullopt;
}

std::optional<Eigen::Index> LabelInventory::tag_index(std::string_view tag) const {
  if (auto it = tag_ids_.find(std::string(tag)); it != tag_ids_.end()) return it->second;
  return std::nullopt;
}

}  // namespace csaug::toy
