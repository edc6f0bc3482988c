#include "csaug/toymodel/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "csaug/error.hpp"
#include "csaug/rng.hpp"

namespace csaug::toy {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

std::string syllables(Rng& rng, std::size_t count) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) {
    s += kConsonants[uniform_index(rng, kConsonants.size())];
    s += kVowels[uniform_index(rng, kVowels.size())];
  }
  return s;
}

class RootPool {
 public:
  explicit RootPool(Rng& rng) : rng_(rng) {}

  std::string fresh() {
    while (true) {
      auto root = syllables(rng_, 2 + uniform_index(rng_, 2));
      if (used_.insert(root).second) return root;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

// One template element: a fixed word (concept id) or a slot of some type.
struct Item {
  bool is_slot = false;
  std::size_t id = 0;
};

struct Grammar {
  std::size_t concepts = 0;
  std::vector<std::vector<std::vector<Item>>> templates;          // [intent][template]
  std::vector<std::vector<std::vector<std::size_t>>> slot_values;  // [type][value] -> concepts
};

Grammar make_grammar(const SyntheticCorpusSpec& spec, Rng& rng) {
  Grammar g;
  const std::size_t function_base = 0;
  const std::size_t keyword_base = spec.function_words;
  g.concepts = keyword_base + 2 * spec.intents;

  g.slot_values.resize(spec.slot_types);
  for (auto& values : g.slot_values) {
    values.resize(spec.values_per_slot);
    for (auto& value : values) {
      const std::size_t words = 1 + uniform_index(rng, 2);
      for (std::size_t w = 0; w < words; ++w) value.push_back(g.concepts++);
    }
  }

  auto function_word = [&] { return Item{false, function_base + uniform_index(rng, spec.function_words)}; };
  g.templates.resize(spec.intents);
  for (std::size_t intent = 0; intent < spec.intents; ++intent) {
    const std::size_t first_slot = uniform_index(rng, spec.slot_types);
    std::size_t second_slot = uniform_index(rng, spec.slot_types);
    if (spec.slot_types > 1) {
      while (second_slot == first_slot) second_slot = uniform_index(rng, spec.slot_types);
    }
    for (std::size_t t = 0; t < spec.templates_per_intent; ++t) {
      std::vector<Item> core = {{false, keyword_base + 2 * intent},
                                {false, keyword_base + 2 * intent + 1},
                                {true, first_slot},
                                {true, second_slot}};
      for (std::size_t i = core.size(); i > 1; --i) std::swap(core[i - 1], core[uniform_index(rng, i)]);
      std::vector<Item> items;
      const std::size_t lead = 1 + uniform_index(rng, 2);
      for (std::size_t i = 0; i < lead; ++i) items.push_back(function_word());
      for (const auto& item : core) {
        items.push_back(item);
        if (uniform_index(rng, 2) == 0) items.push_back(function_word());
      }
      g.templates[intent].push_back(std::move(items));
    }
  }
  return g;
}

std::string language_code(std::size_t family, std::size_t member) {
  std::string code = "q";
  code += static_cast<char>('a' + family);
  code += static_cast<char>('a' + member);
  return code;
}

}  // namespace

const Dataset& SyntheticCorpus::dataset(Split split, const std::string& language) const {
  const auto s = datasets.find(split);
  if (s == datasets.end() || !s->second.contains(language)) {
    throw Error(ErrorCode::ConfigurationError, "synthetic corpus has no " + std::string(to_string(split)) +
                                                   " split for '" + language + "'");
  }
  return s->second.at(language);
}

std::string SyntheticCorpus::family_of(const std::string& language) const {
  for (const auto& [name, members] : families) {
    if (std::find(members.begin(), members.end(), language) != members.end()) return name;
  }
  throw Error(ErrorCode::UnknownFamily, "language '" + language + "' is not in the synthetic corpus");
}

LexiconProvider SyntheticCorpus::lexicon_provider() const { return LexiconProvider(lexicons, "lex:synthetic"); }

void SyntheticCorpus::write(const std::filesystem::path& directory) const {
  std::filesystem::create_directories(directory / "lexicon");
  for (const auto& [split, by_language] : datasets) {
    for (const auto& [language, ds] : by_language) {
      write_dataset(ds, directory / (language + "." + std::string(to_string(split)) + ".tsv"));
    }
  }
  for (const auto& [pair, table] : lexicons) {
    std::vector<std::pair<std::string, std::string>> rows(table.begin(), table.end());
    std::sort(rows.begin(), rows.end());
    const auto path = directory / "lexicon" / (pair.first + "-" + pair.second + ".tsv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& [from, to] : rows) out << from << '\t' << to << '\n';
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  }
}

SyntheticCorpus generate_synthetic(const SyntheticCorpusSpec& spec) {
  if (spec.families == 0 || spec.families > 26 || spec.languages_per_family == 0 ||
      spec.languages_per_family > 26 || spec.intents == 0 || spec.slot_types == 0 ||
      spec.values_per_slot == 0 || spec.function_words == 0 || spec.templates_per_intent == 0) {
    throw Error(ErrorCode::ConfigurationError, "synthetic corpus spec has an empty or oversized dimension");
  }
  Rng rng(derive_seed(spec.seed, 0, 0));
  const Grammar grammar = make_grammar(spec, rng);

  SyntheticCorpus corpus;
  RootPool roots(rng);
  std::vector<std::string> global(grammar.concepts);
  for (auto& r : global) r = roots.fresh();

  const double p_family = std::sqrt(spec.shared_root_across);
  const double p_member = std::sqrt(spec.shared_root_within);
  std::vector<std::vector<std::string>> forms;  // [language][concept]
  std::set<std::string> suffixes;
  for (std::size_t f = 0; f < spec.families; ++f) {
    const std::string family = "fam-" + std::string(1, static_cast<char>('a' + f));
    std::vector<std::string> family_roots(grammar.concepts);
    for (std::size_t c = 0; c < grammar.concepts; ++c) {
      family_roots[c] = uniform_unit(rng) < p_family ? global[c] : roots.fresh();
    }
    for (std::size_t m = 0; m < spec.languages_per_family; ++m) {
      const auto code = language_code(f, m);
      corpus.languages.push_back(code);
      corpus.families[family].push_back(code);
      std::string suffix;
      do {
        suffix = syllables(rng, 1);
      } while (!suffixes.insert(suffix).second && suffixes.size() < kConsonants.size() * kVowels.size());
      std::vector<std::string> lang_forms(grammar.concepts);
      for (std::size_t c = 0; c < grammar.concepts; ++c) {
        const auto& root = uniform_unit(rng) < p_member ? family_roots[c] : roots.fresh();
        lang_forms[c] = root + suffix;
      }
      forms.push_back(std::move(lang_forms));
    }
  }

  for (std::size_t a = 0; a < corpus.languages.size(); ++a) {
    for (std::size_t b = 0; b < corpus.languages.size(); ++b) {
      if (a == b) continue;
      auto& table = corpus.lexicons[{corpus.languages[a], corpus.languages[b]}];
      for (std::size_t c = 0; c < grammar.concepts; ++c) table.emplace(forms[a][c], forms[b][c]);
    }
  }

  const std::array<Split, 3> splits = {Split::Train, Split::Dev, Split::Test};
  for (std::size_t s = 0; s < splits.size(); ++s) {
    Rng split_rng(derive_seed(spec.seed, s + 1, 0));
    std::vector<std::vector<std::size_t>> sentences;
    std::vector<std::vector<std::string>> labels;
    std::vector<std::size_t> intents;
    for (std::size_t n = 0; n < spec.utterances_per_split; ++n) {
      const auto intent = uniform_index(split_rng, spec.intents);
      const auto& items = grammar.templates[intent][uniform_index(split_rng, spec.templates_per_intent)];
      std::vector<std::size_t> concepts;
      std::vector<std::string> tags;
      for (const auto& item : items) {
        if (!item.is_slot) {
          concepts.push_back(item.id);
          tags.emplace_back("O");
          continue;
        }
        const auto& value = grammar.slot_values[item.id][uniform_index(split_rng, spec.values_per_slot)];
        const auto type = "slot" + std::to_string(item.id);
        for (std::size_t w = 0; w < value.size(); ++w) {
          concepts.push_back(value[w]);
          tags.push_back((w == 0 ? "B-" : "I-") + type);
        }
      }
      sentences.push_back(std::move(concepts));
      labels.push_back(std::move(tags));
      intents.push_back(intent);
    }

    for (std::size_t l = 0; l < corpus.languages.size(); ++l) {
      Dataset ds;
      ds.language = corpus.languages[l];
      ds.split = splits[s];
      for (std::size_t n = 0; n < sentences.size(); ++n) {
        Utterance u;
        char id[32];
        std::snprintf(id, sizeof id, "%s-%04zu", std::string(to_string(splits[s])).c_str(), n + 1);
        u.id = id;
        for (auto c : sentences[n]) u.tokens.push_back(forms[l][c]);
        u.slot_labels = labels[n];
        u.intent = "intent" + std::to_string(intents[n]);
        ds.utterances.push_back(std::move(u));
      }
      corpus.datasets[splits[s]][corpus.languages[l]] = std::move(ds);
    }
  }
  return corpus;
}

}  // namespace csaug::toy
