#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace csaug {

enum class Provenance { Lexicon, Http, Cache, IdentityFallback };

std::string_view to_string(Provenance p);

struct TranslationRequest {
  std::string text;
  std::string source_lang;
  std::string target_lang;
};

struct TranslationResult {
  std::string text;
  std::vector<std::string> tokens;
  Provenance provenance = Provenance::Lexicon;
};

/// Splits translated text into tokens: whitespace first, then, for
/// scriptio-continua languages, each whitespace token is cut at boundaries
/// between Han/Kana runs and other characters (each run is one token).
std::vector<std::string> tokenize_translation(std::string_view text, std::string_view lang);

/// Collapses whitespace runs to single spaces and trims both ends.
std::string normalize_space(std::string_view text);

/// Phrase translation backend. Implementations must be safe to call from
/// many threads at once.
class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;

  /// Stable identifier; cache entries are never shared across ids.
  virtual std::string id() const = 0;
  virtual std::set<std::string> supported_languages() const = 0;
  virtual TranslationResult translate(const TranslationRequest& request) const = 0;
};

/// Validates the request, dispatches to the provider and checks the result
/// is non-empty (EmptyTranslation otherwise).
TranslationResult translate(const TranslationRequest& request, const TranslationProvider& provider);

// ---------------------------------------------------------------------------

/// Offline provider backed by `<src>-<tgt>.tsv` files of
/// `source_phrase<TAB>target_phrase` lines. Lookup is exact phrase first,
/// then word by word, with untranslatable words passed through unchanged.
/// Source phrases match case-insensitively (ASCII folding).
class LexiconProvider : public TranslationProvider {
 public:
  using Table = std::unordered_map<std::string, std::string>;
  using LanguagePair = std::pair<std::string, std::string>;

  /// Throws ConfigurationError on a missing/empty directory, an unparsable
  /// file name, a malformed line or a duplicate source phrase.
  explicit LexiconProvider(const std::filesystem::path& directory);
  LexiconProvider(std::map<LanguagePair, Table> tables, std::string id);

  std::string id() const override { return id_; }
  std::set<std::string> supported_languages() const override;
  TranslationResult translate(const TranslationRequest& request) const override;

  /// Loads one lexicon file. Keys are case-folded.
  static Table load_table(const std::filesystem::path& file);
  /// Splits a lexicon file stem such as `en-zh-cn` into (en, zh-cn).
  static std::optional<LanguagePair> parse_pair_name(std::string_view stem);

 private:
  std::map<LanguagePair, Table> tables_;
  std::string id_;
};

// ---------------------------------------------------------------------------

/// Append-only on-disk translation memo. One TSV file per
/// (provider, source, target) under `<dir>/<provider-key>/<src>__<tgt>.tsv`.
/// Reads may run concurrently; writes are serialised.
class TranslationCache {
 public:
  explicit TranslationCache(std::filesystem::path directory);

  std::optional<std::string> lookup(const std::string& provider_id, const TranslationRequest& request) const;
  void store(const std::string& provider_id, const TranslationRequest& request,
             const std::string& translation);

  const std::filesystem::path& directory() const { return directory_; }
  std::filesystem::path file_for(const std::string& provider_id, std::string_view source,
                                 std::string_view target) const;

 private:
  using Key = std::tuple<std::string, std::string, std::string>;
  using Entries = std::unordered_map<std::string, std::string>;

  Entries& entries_locked(const Key& key) const;

  std::filesystem::path directory_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, Entries> loaded_;
};

/// Serves repeat requests from a TranslationCache before calling `inner`.
class CachedProvider : public TranslationProvider {
 public:
  CachedProvider(std::shared_ptr<const TranslationProvider> inner,
                 std::shared_ptr<TranslationCache> cache);

  std::string id() const override { return inner_->id(); }
  std::set<std::string> supported_languages() const override { return inner_->supported_languages(); }
  TranslationResult translate(const TranslationRequest& request) const override;

 private:
  std::shared_ptr<const TranslationProvider> inner_;
  std::shared_ptr<TranslationCache> cache_;
};

// ---------------------------------------------------------------------------

struct HttpOptions {
  std::string base_url;
  std::optional<std::string> bearer_token;
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{250};
  std::chrono::milliseconds timeout{10000};
  std::size_t max_in_flight = 4;
};

/// JSON-over-HTTP provider. POST `<base>/translate` with
/// `{"q","source","target"}` -> `{"translatedText"}`; GET `<base>/languages`
/// -> `[{"code"}]`. 5xx and transport failures are retried with exponential
/// backoff; 429 raises RateLimited; other 4xx fail immediately.
class HttpProvider : public TranslationProvider {
 public:
  explicit HttpProvider(HttpOptions options);

  std::string id() const override { return "http:" + options_.base_url; }
  std::set<std::string> supported_languages() const override;
  TranslationResult translate(const TranslationRequest& request) const override;

  /// Number of HTTP requests issued so far (including retries).
  std::size_t requests_sent() const { return requests_sent_.load(); }

 private:
  class Slot;

  std::string scheme_host_port_;
  std::string path_prefix_;
  HttpOptions options_;

  mutable std::mutex languages_mutex_;
  mutable std::optional<std::set<std::string>> languages_;

  mutable std::mutex flight_mutex_;
  mutable std::condition_variable flight_cv_;
  mutable std::size_t in_flight_ = 0;
  mutable std::atomic<std::size_t> requests_sent_{0};
};

/// Builds a provider from `lex:<directory>` or `http:<base-url>`, wrapped in
/// a cache when `cache_dir` is given. `CSAUG_HTTP_TOKEN` is forwarded as a
/// bearer token to HTTP providers.
std::shared_ptr<const TranslationProvider> make_provider(
    std::string_view spec, const std::optional<std::filesystem::path>& cache_dir = std::nullopt,
    std::size_t max_in_flight = 4);

}  // namespace csaug
