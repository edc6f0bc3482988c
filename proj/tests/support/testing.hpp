#pragma once

// Helpers shared by the unit tests and the acceptance runner.

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "csaug/bio.hpp"
#include "csaug/cli.hpp"
#include "csaug/corpus.hpp"
#include "csaug/error.hpp"
#include "csaug/rng.hpp"
#include "csaug/translate.hpp"

namespace csaug::testing {

inline std::filesystem::path fixtures_dir() { return CSAUG_FIXTURES_DIR; }

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    do {
      path_ = base / ("csaug-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    } while (std::filesystem::exists(path_));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

/// Random strict-BIO label sequence over the given slot types.
inline std::vector<std::string> random_labels(Rng& rng, std::size_t length, const std::vector<std::string>& types) {
  std::vector<std::string> labels;
  std::string open;  // type of the group the previous token belongs to, if any
  for (std::size_t i = 0; i < length; ++i) {
    const auto r = uniform_index(rng, 3);
    if (r == 0 || types.empty()) {
      labels.emplace_back("O");
      open.clear();
    } else if (r == 1 || open.empty()) {
      open = types[uniform_index(rng, types.size())];
      labels.push_back(begin_tag(open));
    } else {
      labels.push_back(inside_tag(open));
    }
  }
  return labels;
}

/// Random valid utterance with tokens drawn from a small vocabulary.
inline Utterance random_utterance(Rng& rng, const std::string& id, std::size_t max_len = 12) {
  static const std::vector<std::string> kTypes = {"city", "date", "airline"};
  Utterance u;
  u.id = id;
  const auto len = 1 + uniform_index(rng, max_len);
  for (std::size_t t = 0; t < len; ++t) u.tokens.push_back("w" + std::to_string(uniform_index(rng, 20)));
  u.slot_labels = random_labels(rng, len, kTypes);
  u.intent = "intent" + std::to_string(uniform_index(rng, 4));
  return u;
}

inline Dataset random_dataset(Rng& rng, std::size_t n, std::size_t max_len = 12) {
  Dataset ds;
  for (std::size_t i = 0; i < n; ++i) ds.utterances.push_back(random_utterance(rng, "u" + std::to_string(i), max_len));
  return ds;
}

/// Provider that records every request and answers `<word>.<lang>` per word,
/// optionally stretching each phrase by `extra` tokens.
class SpyProvider : public TranslationProvider {
 public:
  explicit SpyProvider(std::set<std::string> languages, std::size_t extra = 0)
      : languages_(std::move(languages)), extra_(extra) {}

  std::string id() const override { return "spy"; }
  std::set<std::string> supported_languages() const override { return languages_; }

  TranslationResult translate(const TranslationRequest& request) const override {
    {
      std::lock_guard lock(mutex_);
      requests_.push_back(request);
      ++per_target_[request.target_lang];
    }
    if (!languages_.contains(request.target_lang)) {
      throw Error(ErrorCode::UnsupportedLanguage, "spy does not support " + request.target_lang);
    }
    TranslationResult r;
    std::istringstream words(request.text);
    std::string w;
    while (words >> w) r.tokens.push_back(w + "." + request.target_lang);
    for (std::size_t i = 0; i < extra_; ++i) r.tokens.push_back("pad." + request.target_lang);
    for (const auto& t : r.tokens) r.text += (r.text.empty() ? "" : " ") + t;
    return r;
  }

  std::vector<TranslationRequest> requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }
  std::map<std::string, std::size_t> per_target() const {
    std::lock_guard lock(mutex_);
    return per_target_;
  }

 private:
  std::set<std::string> languages_;
  std::size_t extra_;
  mutable std::mutex mutex_;
  mutable std::vector<TranslationRequest> requests_;
  mutable std::map<std::string, std::size_t> per_target_;
};

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

/// Runs the CLI in-process.
inline CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "csaug");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace csaug::testing
