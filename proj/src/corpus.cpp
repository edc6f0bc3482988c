#include "csaug/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "csaug/bio.hpp"
#include "csaug/error.hpp"

namespace csaug {

namespace {

constexpr std::string_view kTsvHeader = "id\tutterance\tslot_labels\tintent";

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

bool has_line_break(std::string_view s) {
  return s.find_first_of("\t\r\n") != std::string_view::npos;
}

std::string prefix(std::string_view where) {
  return where.empty() ? std::string() : std::string(where) + ": ";
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string location(std::size_t line_no, std::string_view id) {
  std::ostringstream os;
  os << "line " << line_no;
  if (!id.empty()) os << " (id " << id << ")";
  return os.str();
}

// Validates and optionally repairs, then appends.
void accept(Dataset& ds, Utterance u, const ReadOptions& options, const std::string& where) {
  if (options.repair && !first_malformed_label(u.slot_labels) &&
      u.slot_labels.size() == u.tokens.size()) {
    repair_transitions(u.slot_labels);
  }
  validate_utterance(u, where);
  ds.utterances.push_back(std::move(u));
}

Dataset parse_tsv(std::istream& in, const ReadOptions& options) {
  Dataset ds{{}, options.language, options.split};
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::MalformedRecord, "line 1: missing header");
  }
  ++line_no;
  strip_cr(line);
  if (line != kTsvHeader) {
    throw Error(ErrorCode::MalformedRecord,
                "line 1: expected header 'id<TAB>utterance<TAB>slot_labels<TAB>intent'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) {
      std::ostringstream os;
      os << location(line_no, fields.front()) << ": expected 4 tab-separated columns, got "
         << fields.size();
      throw Error(ErrorCode::MalformedRecord, os.str());
    }
    const auto where = location(line_no, fields[0]);
    Utterance u;
    u.id = std::move(fields[0]);
    u.tokens = fields[1].empty() ? std::vector<std::string>{} : split(fields[1], ' ');
    u.slot_labels = fields[2].empty() ? std::vector<std::string>{} : split(fields[2], ' ');
    u.intent = std::move(fields[3]);
    accept(ds, std::move(u), options, where);
  }
  return ds;
}

Dataset parse_conll(std::istream& in, const ReadOptions& options) {
  Dataset ds{{}, options.language, options.split};
  Utterance current;
  bool have_intent = false;
  bool open = false;
  std::size_t start_line = 0;
  std::size_t line_no = 0;

  auto flush = [&] {
    if (!open) return;
    const auto where = location(start_line, current.id);
    if (current.id.empty()) current.id = std::to_string(ds.utterances.size() + 1);
    if (!have_intent) throw Error(ErrorCode::MalformedRecord, where + ": missing '# intent = ' line");
    accept(ds, std::move(current), options, where);
    current = Utterance{};
    have_intent = false;
    open = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) {
      flush();
      continue;
    }
    if (!open) {
      open = true;
      start_line = line_no;
    }
    if (line.front() == '#' && line.find('\t') == std::string::npos) {
      constexpr std::string_view kId = "# id = ";
      constexpr std::string_view kIntent = "# intent = ";
      if (line.starts_with(kId)) {
        current.id = line.substr(kId.size());
      } else if (line.starts_with(kIntent)) {
        current.intent = line.substr(kIntent.size());
        have_intent = true;
      }
      continue;
    }
    auto fields = split(line, '\t');
    if (fields.size() != 2) {
      std::ostringstream os;
      os << location(line_no, current.id) << ": expected 'token<TAB>label', got " << fields.size()
         << " columns";
      throw Error(ErrorCode::MalformedRecord, os.str());
    }
    current.tokens.push_back(std::move(fields[0]));
    current.slot_labels.push_back(std::move(fields[1]));
  }
  flush();
  return ds;
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "dev") return Split::Dev;
  if (name == "test") return Split::Test;
  throw Error(ErrorCode::ConfigurationError, "unknown split '" + std::string(name) + "'");
}

std::string_view to_string(Format format) {
  return format == Format::Conll ? "conll" : "multiatis-tsv";
}

Format parse_format(std::string_view name) {
  if (name == "multiatis-tsv" || name == "tsv") return Format::MultiAtisTsv;
  if (name == "conll") return Format::Conll;
  throw Error(ErrorCode::UnknownFormat, "unknown dataset format '" + std::string(name) + "'");
}

void validate_utterance(const Utterance& u, std::string_view where) {
  const auto at = prefix(where);
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::MalformedRecord, at + what); };

  if (u.id.empty() || has_line_break(u.id)) fail("id must be non-empty and free of tabs/newlines");
  if (u.intent.empty() || has_line_break(u.intent)) {
    fail("intent must be non-empty and free of tabs/newlines");
  }
  if (u.tokens.empty()) fail("utterance has no tokens");
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    if (u.tokens[i].empty() || has_space(u.tokens[i])) {
      fail("token " + std::to_string(i) + " is empty or contains whitespace");
    }
  }
  if (u.slot_labels.size() != u.tokens.size()) {
    fail(std::to_string(u.slot_labels.size()) + " slot labels for " +
         std::to_string(u.tokens.size()) + " tokens");
  }
  if (auto bad = first_malformed_label(u.slot_labels)) {
    fail("malformed slot label '" + u.slot_labels[*bad] + "' at token " + std::to_string(*bad));
  }
  if (auto bad = first_illegal_transition(u.slot_labels)) {
    throw Error(ErrorCode::IllegalBioTransition,
                at + "'" + u.slot_labels[*bad] + "' at token " + std::to_string(*bad) +
                    " does not continue a slot of the same type");
  }
}

void validate_dataset(const Dataset& ds) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < ds.utterances.size(); ++i) {
    const auto& u = ds.utterances[i];
    const auto where = "record " + std::to_string(i + 1) + " (id " + u.id + ")";
    validate_utterance(u, where);
    if (!seen.insert(u.id).second) {
      throw Error(ErrorCode::MalformedRecord, where + ": duplicate id");
    }
  }
}

Dataset parse_dataset(std::istream& in, const ReadOptions& options) {
  Dataset ds = options.format == Format::Conll ? parse_conll(in, options) : parse_tsv(in, options);
  validate_dataset(ds);
  return ds;
}

Dataset read_dataset(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  return parse_dataset(in, options);
}

void format_dataset(const Dataset& ds, std::ostream& out, Format format) {
  if (format == Format::MultiAtisTsv) {
    out << kTsvHeader << '\n';
    for (const auto& u : ds.utterances) {
      out << u.id << '\t' << join(u.tokens, ' ') << '\t' << join(u.slot_labels, ' ') << '\t'
          << u.intent << '\n';
    }
    return;
  }
  for (const auto& u : ds.utterances) {
    out << "# id = " << u.id << '\n' << "# intent = " << u.intent << '\n';
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      out << u.tokens[i] << '\t' << u.slot_labels[i] << '\n';
    }
    out << '\n';
  }
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  format_dataset(ds, out, format);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

DatasetStats compute_stats(const Dataset& ds) {
  DatasetStats stats;
  std::set<std::string_view> intents;
  std::set<std::string_view> tags;
  std::set<std::string_view> types;
  for (const auto& u : ds.utterances) {
    stats.token_count += u.tokens.size();
    intents.insert(u.intent);
    for (const auto& label : u.slot_labels) {
      if (label == "O") continue;
      tags.insert(label);
      types.insert(std::string_view(label).substr(2));
    }
  }
  stats.utterance_count = ds.utterances.size();
  stats.intent_count = intents.size();
  stats.slot_type_count = types.size();
  stats.slot_tag_count = tags.size();
  return stats;
}

}  // namespace csaug
