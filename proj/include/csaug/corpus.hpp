#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace csaug {

/// One labelled sentence: tokens, one BIO slot label per token, and the
/// sentence-level intent.
struct Utterance {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> slot_labels;
  std::string intent;

  bool operator==(const Utterance&) const = default;
};

enum class Split { Train, Dev, Test };

std::string_view to_string(Split split);
Split parse_split(std::string_view name);

struct Dataset {
  std::vector<Utterance> utterances;
  std::string language = "en";
  Split split = Split::Train;

  std::size_t size() const { return utterances.size(); }
  bool empty() const { return utterances.empty(); }

  bool operator==(const Dataset&) const = default;
};

enum class Format { MultiAtisTsv, Conll };

std::string_view to_string(Format format);
/// Accepts "multiatis-tsv" / "tsv" and "conll"; throws UnknownFormat.
Format parse_format(std::string_view name);

struct ReadOptions {
  Format format = Format::MultiAtisTsv;
  /// Rewrite illegal `I-x` to `B-x` instead of failing.
  bool repair = false;
  std::string language = "en";
  Split split = Split::Train;
};

/// Checks a single utterance against every invariant. `where` prefixes the
/// error message (e.g. "line 12"). Throws MalformedRecord or
/// IllegalBioTransition.
void validate_utterance(const Utterance& u, std::string_view where = {});

/// Validates every utterance plus id uniqueness.
void validate_dataset(const Dataset& ds);

Dataset parse_dataset(std::istream& in, const ReadOptions& options);
Dataset read_dataset(const std::filesystem::path& path, const ReadOptions& options = {});

void format_dataset(const Dataset& ds, std::ostream& out, Format format);
void write_dataset(const Dataset& ds, const std::filesystem::path& path,
                   Format format = Format::MultiAtisTsv);

struct DatasetStats {
  std::size_t utterance_count = 0;
  std::size_t token_count = 0;
  std::size_t intent_count = 0;
  /// Distinct slot types (B-x and I-x count once, as x).
  std::size_t slot_type_count = 0;
  /// Distinct non-O tags (B-x and I-x count separately).
  std::size_t slot_tag_count = 0;

  bool operator==(const DatasetStats&) const = default;
};

DatasetStats compute_stats(const Dataset& ds);

}  // namespace csaug
