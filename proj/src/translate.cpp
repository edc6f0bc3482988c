#include "csaug/translate.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csaug/error.hpp"
#include "csaug/families.hpp"
#include "csaug/utf8.hpp"

namespace csaug {

namespace {

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string_view> split_space(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool known_compound_code(std::string_view code) {
  if (code == "zh-tw" || code == "pt-br") return true;
  for (const auto& family : family_registry()) {
    for (const auto& m : family.members) {
      if (m == code && m.find('-') != std::string::npos) return true;
    }
  }
  return false;
}

// Escaping for cache files: backslash, tab, CR and LF.
std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default: out += s[i];
    }
  }
  return out;
}

// FNV-1a, used to keep cache directory names collision-free.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string provider_key(const std::string& provider_id) {
  std::string key;
  for (char c : provider_id) {
    key += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  if (key.size() > 48) key.resize(48);
  std::ostringstream os;
  os << key << '-' << std::hex << fnv1a(provider_id);
  return os.str();
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Lexicon: return "lexicon";
    case Provenance::Http: return "http";
    case Provenance::Cache: return "cache";
    case Provenance::IdentityFallback: return "identity-fallback";
  }
  return "lexicon";
}

std::string normalize_space(std::string_view text) {
  std::string out;
  for (auto piece : split_space(text)) {
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

std::vector<std::string> tokenize_translation(std::string_view text, std::string_view lang) {
  std::vector<std::string> tokens;
  const bool by_script = is_scriptio_continua(lang);
  for (auto piece : split_space(text)) {
    if (!by_script) {
      tokens.emplace_back(piece);
      continue;
    }
    std::string run;
    bool run_is_cjk = false;
    for (auto unit : utf8::code_units(piece)) {
      const bool cjk = utf8::is_han_or_kana(utf8::decode(unit));
      if (!run.empty() && cjk != run_is_cjk) {
        tokens.push_back(std::move(run));
        run.clear();
      }
      run_is_cjk = cjk;
      run += unit;
    }
    if (!run.empty()) tokens.push_back(std::move(run));
  }
  return tokens;
}

TranslationResult translate(const TranslationRequest& request, const TranslationProvider& provider) {
  if (normalize_space(request.text).empty()) {
    throw Error(ErrorCode::ConfigurationError, "translation request with empty text");
  }
  if (request.source_lang == request.target_lang) {
    throw Error(ErrorCode::ConfigurationError,
                "translation request with identical source and target '" + request.source_lang + "'");
  }
  auto result = provider.translate(request);
  if (result.tokens.empty()) {
    throw Error(ErrorCode::EmptyTranslation, "provider " + provider.id() + " returned an empty translation for '" +
                                                 request.text + "' (" + request.source_lang + "->" +
                                                 request.target_lang + ")");
  }
  return result;
}

// ---------------------------------------------------------------------------
// LexiconProvider

std::optional<LexiconProvider::LanguagePair> LexiconProvider::parse_pair_name(std::string_view stem) {
  std::vector<std::size_t> hyphens;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (stem[i] == '-') hyphens.push_back(i);
  }
  std::optional<LanguagePair> best;
  int best_score = -1;
  for (auto pos : hyphens) {
    const auto left = stem.substr(0, pos);
    const auto right = stem.substr(pos + 1);
    if (!is_language_code(left) || !is_language_code(right)) continue;
    auto side_score = [](std::string_view code) {
      return code.find('-') == std::string_view::npos || known_compound_code(code) ? 1 : 0;
    };
    const int score = side_score(left) + side_score(right);
    if (score > best_score) {
      best_score = score;
      best = LanguagePair{std::string(left), std::string(right)};
    }
  }
  return best;
}

LexiconProvider::Table LexiconProvider::load_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigurationError, "cannot open lexicon '" + file.string() + "'");
  Table table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = file.string() + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::ConfigurationError, where + ": expected 'source<TAB>target'");
    }
    auto source = fold_case(normalize_space(std::string_view(line).substr(0, tab)));
    auto target = normalize_space(std::string_view(line).substr(tab + 1));
    if (source.empty() || target.empty()) {
      throw Error(ErrorCode::ConfigurationError, where + ": empty phrase");
    }
    if (!table.emplace(source, std::move(target)).second) {
      throw Error(ErrorCode::ConfigurationError, where + ": duplicate source phrase '" + source + "'");
    }
  }
  return table;
}

LexiconProvider::LexiconProvider(const std::filesystem::path& directory)
    : id_("lex:" + directory.string()) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw Error(ErrorCode::ConfigurationError, "lexicon directory '" + directory.string() + "' not found");
  }
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".tsv") continue;
    const auto stem = entry.path().stem().string();
    auto pair = parse_pair_name(stem);
    if (!pair) {
      throw Error(ErrorCode::ConfigurationError,
                  "lexicon file name '" + entry.path().filename().string() + "' is not <src>-<tgt>.tsv");
    }
    tables_.emplace(std::move(*pair), load_table(entry.path()));
  }
  if (tables_.empty()) {
    throw Error(ErrorCode::ConfigurationError, "lexicon directory '" + directory.string() + "' has no <src>-<tgt>.tsv files");
  }
}

LexiconProvider::LexiconProvider(std::map<LanguagePair, Table> tables, std::string id)
    : tables_(std::move(tables)), id_(std::move(id)) {
  if (tables_.empty()) throw Error(ErrorCode::ConfigurationError, "lexicon provider without tables");
}

std::set<std::string> LexiconProvider::supported_languages() const {
  std::set<std::string> out;
  for (const auto& [pair, table] : tables_) out.insert(pair.second);
  return out;
}

TranslationResult LexiconProvider::translate(const TranslationRequest& request) const {
  const auto it = tables_.find({request.source_lang, request.target_lang});
  if (it == tables_.end()) {
    throw Error(ErrorCode::UnsupportedLanguage,
                id_ + " has no lexicon for " + request.source_lang + "->" + request.target_lang);
  }
  const auto& table = it->second;
  const auto phrase = normalize_space(request.text);

  TranslationResult result;
  if (auto hit = table.find(fold_case(phrase)); hit != table.end()) {
    result.text = hit->second;
  } else {
    bool fell_back = false;
    for (auto word : split_space(phrase)) {
      if (!result.text.empty()) result.text += ' ';
      if (auto w = table.find(fold_case(word)); w != table.end()) {
        result.text += w->second;
      } else {
        result.text += word;
        fell_back = true;
      }
    }
    if (fell_back) result.provenance = Provenance::IdentityFallback;
  }
  result.tokens = tokenize_translation(result.text, request.target_lang);
  return result;
}

// ---------------------------------------------------------------------------
// TranslationCache

TranslationCache::TranslationCache(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec || !std::filesystem::is_directory(directory_)) {
    throw Error(ErrorCode::IoFailure, "cannot create cache directory '" + directory_.string() + "'");
  }
}

std::filesystem::path TranslationCache::file_for(const std::string& provider_id, std::string_view source,
                                                 std::string_view target) const {
  return directory_ / provider_key(provider_id) /
         (std::string(source) + "__" + std::string(target) + ".tsv");
}

TranslationCache::Entries& TranslationCache::entries_locked(const Key& key) const {
  if (auto it = loaded_.find(key); it != loaded_.end()) return it->second;
  Entries entries;
  std::ifstream in(file_for(std::get<0>(key), std::get<1>(key), std::get<2>(key)), std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    // A line without a tab is a torn write from an interrupted run.
    if (tab == std::string::npos) continue;
    entries.insert_or_assign(unescape_field(std::string_view(line).substr(0, tab)),
                             unescape_field(std::string_view(line).substr(tab + 1)));
  }
  return loaded_.emplace(key, std::move(entries)).first->second;
}

std::optional<std::string> TranslationCache::lookup(const std::string& provider_id,
                                                    const TranslationRequest& request) const {
  const Key key{provider_id, request.source_lang, request.target_lang};
  {
    std::shared_lock lock(mutex_);
    if (auto it = loaded_.find(key); it != loaded_.end()) {
      if (auto hit = it->second.find(request.text); hit != it->second.end()) return hit->second;
      return std::nullopt;
    }
  }
  std::unique_lock lock(mutex_);
  const auto& entries = entries_locked(key);
  if (auto hit = entries.find(request.text); hit != entries.end()) return hit->second;
  return std::nullopt;
}

void TranslationCache::store(const std::string& provider_id, const TranslationRequest& request,
                             const std::string& translation) {
  const Key key{provider_id, request.source_lang, request.target_lang};
  std::unique_lock lock(mutex_);
  auto& entries = entries_locked(key);
  if (entries.contains(request.text)) return;

  const auto file = file_for(provider_id, request.source_lang, request.target_lang);
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << escape_field(request.text) << '\t' << escape_field(translation) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "cannot append to cache file '" + file.string() + "'");
  entries.emplace(request.text, translation);
}

// ---------------------------------------------------------------------------
// CachedProvider

CachedProvider::CachedProvider(std::shared_ptr<const TranslationProvider> inner,
                               std::shared_ptr<TranslationCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

TranslationResult CachedProvider::translate(const TranslationRequest& request) const {
  const auto id = inner_->id();
  if (auto hit = cache_->lookup(id, request)) {
    return {*hit, tokenize_translation(*hit, request.target_lang), Provenance::Cache};
  }
  auto result = inner_->translate(request);
  cache_->store(id, request, result.text);
  return result;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const TranslationProvider> make_provider(std::string_view spec,
                                                         const std::optional<std::filesystem::path>& cache_dir,
                                                         std::size_t max_in_flight) {
  std::shared_ptr<const TranslationProvider> provider;
  if (spec.starts_with("lex:")) {
    provider = std::make_shared<LexiconProvider>(std::filesystem::path(std::string(spec.substr(4))));
  } else if (spec.starts_with("http:")) {
    auto rest = std::string(spec.substr(5));
    // Accept both `http:http://host` and a bare `http://host`.
    if (rest.find("://") == std::string::npos) rest = "http:" + rest;
    HttpOptions options;
    options.base_url = rest;
    options.max_in_flight = max_in_flight;
    if (const char* token = std::getenv("CSAUG_HTTP_TOKEN"); token && *token) options.bearer_token = token;
    provider = std::make_shared<HttpProvider>(std::move(options));
  } else {
    throw Error(ErrorCode::ConfigurationError,
                "provider must be 'lex:<directory>' or 'http:<base-url>', got '" + std::string(spec) + "'");
  }
  if (cache_dir) {
    provider = std::make_shared<CachedProvider>(std::move(provider), std::make_shared<TranslationCache>(*cache_dir));
  }
  return provider;
}

}  // namespace csaug
