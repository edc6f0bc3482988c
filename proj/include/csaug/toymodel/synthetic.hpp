#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "csaug/corpus.hpp"
#include "csaug/translate.hpp"

namespace csaug::toy {

/// Parameters of the synthetic parallel intent/slot corpus.
///
/// Every word is a concept rendered per language as `root + suffix`, with a
/// suffix unique to the language. A family adopts the concept's global root
/// with probability sqrt(shared_root_across), otherwise a fresh root; a
/// language adopts its family's root with probability
/// sqrt(shared_root_within). Two languages of one family therefore share a
/// root with probability shared_root_within.
struct SyntheticCorpusSpec {
  std::size_t families = 3;
  std::size_t languages_per_family = 2;
  double shared_root_within = 0.8;
  double shared_root_across = 0.1;
  std::size_t intents = 6;
  std::size_t templates_per_intent = 2;
  std::size_t slot_types = 5;
  std::size_t values_per_slot = 6;
  std::size_t function_words = 10;
  std::size_t utterances_per_split = 100;
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  /// All language codes, family by family; the first one is the source.
  std::vector<std::string> languages;
  /// Family name -> member codes.
  std::map<std::string, std::vector<std::string>> families;
  /// Parallel datasets: same ids, intents and labels in every language.
  std::map<Split, std::map<std::string, Dataset>> datasets;
  /// Exact word lexicon for every ordered language pair.
  std::map<LexiconProvider::LanguagePair, LexiconProvider::Table> lexicons;

  const std::string& source_language() const { return languages.front(); }
  const Dataset& dataset(Split split, const std::string& language) const;
  std::string family_of(const std::string& language) const;
  LexiconProvider lexicon_provider() const;

  /// Writes `<lang>.<split>.tsv` files and `lexicon/<src>-<tgt>.tsv`.
  void write(const std::filesystem::path& directory) const;
};

/// Deterministic for a given spec.
SyntheticCorpus generate_synthetic(const SyntheticCorpusSpec& spec);

}  // namespace csaug::toy
