#include <thread>

#include "csaug/error.hpp"
#include "csaug/translate.hpp"
#include "httplib.h"
#include "json.hpp"

namespace csaug {

namespace {

struct Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

Endpoint parse_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.substr(0, scheme_end) != "http") {
    throw Error(ErrorCode::ConfigurationError, "HTTP provider needs an http:// base URL, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) e.path_prefix = url.substr(path_start);
  while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  if (e.scheme_host_port.size() <= scheme_end + 3) {
    throw Error(ErrorCode::ConfigurationError, "HTTP provider base URL '" + url + "' has no host");
  }
  return e;
}

}  // namespace

// RAII guard for the in-flight request limit.
class HttpProvider::Slot {
 public:
  explicit Slot(const HttpProvider& owner) : owner_(owner) {
    std::unique_lock lock(owner_.flight_mutex_);
    owner_.flight_cv_.wait(lock, [&] { return owner_.in_flight_ < owner_.options_.max_in_flight; });
    ++owner_.in_flight_;
  }
  ~Slot() {
    {
      std::lock_guard lock(owner_.flight_mutex_);
      --owner_.in_flight_;
    }
    owner_.flight_cv_.notify_one();
  }
  Slot(const Slot&) = delete;
  Slot& operator=(const Slot&) = delete;

 private:
  const HttpProvider& owner_;
};

HttpProvider::HttpProvider(HttpOptions options) : options_(std::move(options)) {
  const auto endpoint = parse_base_url(options_.base_url);
  scheme_host_port_ = endpoint.scheme_host_port;
  path_prefix_ = endpoint.path_prefix;
  if (options_.max_attempts < 1) options_.max_attempts = 1;
  if (options_.max_in_flight < 1) options_.max_in_flight = 1;
}

namespace {

template <typename Send>
std::string send_with_retries(const HttpOptions& options, const std::string& what,
                              std::atomic<std::size_t>& counter, Send&& send) {
  std::string last_failure;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(options.backoff_base * (1 << (attempt - 2)));
    }
    ++counter;
    httplib::Result res = send();
    if (!res) {
      last_failure = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    const int status = res->status;
    if (status >= 200 && status < 300) return res->body;
    if (status == 429) {
      throw Error(ErrorCode::RateLimited, what + ": rate limited by " + options.base_url + " (HTTP 429)");
    }
    if (status >= 400 && status < 500) {
      throw Error(ErrorCode::ProviderUnavailable,
                  what + ": rejected by " + options.base_url + " (HTTP " + std::to_string(status) + ")");
    }
    last_failure = "HTTP " + std::to_string(status);
  }
  throw Error(ErrorCode::ProviderUnavailable, what + ": " + options.base_url + " unavailable after " +
                                                  std::to_string(options.max_attempts) + " attempts (" +
                                                  last_failure + ")");
}

httplib::Headers auth_headers(const HttpOptions& options) {
  httplib::Headers headers;
  if (options.bearer_token) headers.emplace("Authorization", "Bearer " + *options.bearer_token);
  return headers;
}

void configure(httplib::Client& client, const HttpOptions& options) {
  const auto secs = options.timeout.count() / 1000;
  const auto usecs = (options.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
}

}  // namespace

std::set<std::string> HttpProvider::supported_languages() const {
  std::lock_guard lock(languages_mutex_);
  if (languages_) return *languages_;

  const auto body = [&] {
    Slot slot(*this);
    return send_with_retries(options_, "GET /languages", requests_sent_, [&] {
      httplib::Client client(scheme_host_port_);
      configure(client, options_);
      return client.Get(path_prefix_ + "/languages", auth_headers(options_));
    });
  }();

  std::set<std::string> codes;
  try {
    const auto json = nlohmann::json::parse(body);
    for (const auto& item : json) codes.insert(item.at("code").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable,
                "GET /languages: malformed response from " + options_.base_url + ": " + e.what());
  }
  if (codes.empty()) {
    throw Error(ErrorCode::ProviderUnavailable, "GET /languages: " + options_.base_url + " reported no languages");
  }
  languages_ = codes;
  return codes;
}

TranslationResult HttpProvider::translate(const TranslationRequest& request) const {
  if (!supported_languages().contains(request.target_lang)) {
    throw Error(ErrorCode::UnsupportedLanguage,
                options_.base_url + " does not support target language '" + request.target_lang + "'");
  }
  const nlohmann::json payload = {
      {"q", request.text}, {"source", request.source_lang}, {"target", request.target_lang}};
  const auto payload_text = payload.dump();

  const auto body = [&] {
    Slot slot(*this);
    return send_with_retries(options_, "POST /translate", requests_sent_, [&] {
      httplib::Client client(scheme_host_port_);
      configure(client, options_);
      return client.Post(path_prefix_ + "/translate", auth_headers(options_), payload_text, "application/json");
    });
  }();

  std::string text;
  try {
    text = nlohmann::json::parse(body).at("translatedText").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable,
                "POST /translate: malformed response from " + options_.base_url + ": " + e.what());
  }
  TranslationResult result;
  result.text = normalize_space(text);
  result.tokens = tokenize_translation(result.text, request.target_lang);
  result.provenance = Provenance::Http;
  return result;
}

}  // namespace csaug
