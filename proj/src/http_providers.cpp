#include "http_client.hpp"

#include <cmath>

// After Eigen: <resolv.h>, pulled in by httplib, defines a `_res` macro that
// collides with Eigen parameter names.
#include <httplib.h>

namespace verse_eval {
namespace {

struct Endpoint {
  std::string origin;
  std::string prefix;
};

Endpoint split_endpoint(const std::string& endpoint) {
  const std::string scheme = "http://";
  if (endpoint.rfind(scheme, 0) != 0) {
    throw ValidationError("endpoint must be an http:// URL, got '" + endpoint + "'");
  }
  const std::size_t slash = endpoint.find('/', scheme.size());
  Endpoint out;
  if (slash == std::string::npos) {
    out.origin = endpoint;
  } else {
    out.origin = endpoint.substr(0, slash);
    out.prefix = endpoint.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') {
      out.prefix.pop_back();
    }
  }
  if (out.origin.size() == scheme.size()) {
    throw ValidationError("endpoint has no host: '" + endpoint + "'");
  }
  return out;
}

std::string body_excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

// Releases the in-flight slot even when the request throws.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<1024>& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<1024>& sem_;
};

template <typename T>
std::span<const T> slice(std::span<const T> all, std::size_t begin, std::size_t count) {
  return all.subspan(begin, count);
}

}  // namespace

HttpInferenceClient::HttpInferenceClient(ProviderConfig config, Sleeper sleep, bool retry)
    : config_(std::move(config)),
      sleep_(std::move(sleep)),
      in_flight_(static_cast<std::ptrdiff_t>(std::min<std::size_t>(config_.max_in_flight, 1024))) {
  config_.validate();
  if (config_.kind != ProviderKind::http) {
    throw ValidationError("http client requires an http provider config");
  }
  const Endpoint parts = split_endpoint(config_.endpoint);
  origin_ = parts.origin;
  prefix_ = parts.prefix;
  policy_.max_attempts = retry ? 1 + config_.max_retries : 1;
}

io::Json HttpInferenceClient::send_once(const std::string& method, const std::string& path,
                                        const io::Json* body) const {
  SlotGuard slot(in_flight_);
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  const std::string target = prefix_ + path;
  httplib::Result result = body == nullptr
                               ? client.Get(target)
                               : client.Post(target, body->dump(), "application/json");
  if (!result) {
    throw ProviderUnavailable(method + " " + origin_ + target + ": " +
                              httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status >= 500) {
    throw ProviderUnavailable(method + " " + origin_ + target + ": HTTP " +
                              std::to_string(status) + " " + body_excerpt(result->body));
  }
  if (status < 200 || status >= 300) {
    throw ProviderError(method + " " + origin_ + target + ": HTTP " + std::to_string(status) +
                        " " + body_excerpt(result->body));
  }
  try {
    return io::Json::parse(result->body);
  } catch (const io::Json::exception& e) {
    throw ProviderError(method + " " + origin_ + target + ": malformed JSON response: " +
                        e.what());
  }
}

io::Json HttpInferenceClient::post(const std::string& path, const io::Json& body) const {
  return with_retry(policy_, sleep_, [&] { return send_once("POST", path, &body); });
}

io::Json HttpInferenceClient::get(const std::string& path) const {
  return with_retry(policy_, sleep_, [&] { return send_once("GET", path, nullptr); });
}

const ServiceInfo& HttpInferenceClient::info() const {
  std::lock_guard lock(info_mutex_);
  if (info_) {
    return *info_;
  }
  const io::Json health = get("/v1/health");
  ServiceInfo info;
  try {
    if (health.at("status").get<std::string>() != "ok") {
      throw ProviderUnavailable("inference service is not ready: status " +
                                health.at("status").dump());
    }
    const io::Json& body = health.at("info");
    info.embedding_model = body.at("embedding_model").get<std::string>();
    info.sentiment_model = body.at("sentiment_model").get<std::string>();
    info.embedding_dim = body.at("dim").get<int>();
    info.label_order = body.at("label_order").get<std::vector<std::string>>();
  } catch (const io::Json::exception& e) {
    throw ProviderError(std::string("malformed health response: ") + e.what());
  }
  if (info.label_order != canonical_label_order()) {
    throw ProviderError("inference service label order differs from the canonical vocabulary");
  }
  if (info.embedding_dim < 1) {
    throw ProviderError("inference service reports a non-positive embedding dim");
  }
  info_ = std::move(info);
  return *info_;
}

// --- embedding ---------------------------------------------------------------

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig config, Sleeper sleep)
    : client_(std::make_unique<HttpInferenceClient>(std::move(config), std::move(sleep), true)) {}

HttpEmbeddingProvider::~HttpEmbeddingProvider() = default;

std::string HttpEmbeddingProvider::model_id() const { return client_->info().embedding_model; }

std::vector<EmbeddingVector> HttpEmbeddingProvider::embed(std::span<const std::string> texts) const {
  const int dim = client_->info().embedding_dim;
  const std::size_t batch = client_->config().batch_size;
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    const auto chunk = slice(texts, begin, std::min(batch, texts.size() - begin));
    io::Json request;
    request["texts"] = std::vector<std::string>(chunk.begin(), chunk.end());
    const io::Json response = client_->post("/v1/embed", request);
    try {
      if (response.at("dim").get<int>() != dim) {
        throw ProviderError("embedding response dim " + response.at("dim").dump() +
                            " differs from the health dim " + std::to_string(dim));
      }
      const io::Json& vectors = response.at("vectors");
      if (vectors.size() != chunk.size()) {
        throw ProviderError("embedding response has " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(chunk.size()) + " texts");
      }
      for (const auto& row : vectors) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != static_cast<std::size_t>(dim)) {
          throw ProviderError("embedding vector of length " + std::to_string(values.size()) +
                              ", expected " + std::to_string(dim));
        }
        out.emplace_back(Eigen::Map<const EmbeddingVector>(values.data(), dim));
      }
    } catch (const io::Json::exception& e) {
      throw ProviderError(std::string("malformed embedding response: ") + e.what());
    }
  }
  return out;
}

// --- sentiment ---------------------------------------------------------------

HttpSentimentProvider::HttpSentimentProvider(ProviderConfig config, Sleeper sleep)
    : client_(std::make_unique<HttpInferenceClient>(std::move(config), std::move(sleep), true)) {}

HttpSentimentProvider::~HttpSentimentProvider() = default;

std::string HttpSentimentProvider::model_id() const { return client_->info().sentiment_model; }

std::vector<SentimentProbabilities> HttpSentimentProvider::predict(
    std::span<const std::string> texts) const {
  client_->info();
  const std::size_t batch = client_->config().batch_size;
  std::vector<SentimentProbabilities> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    const auto chunk = slice(texts, begin, std::min(batch, texts.size() - begin));
    io::Json request;
    request["texts"] = std::vector<std::string>(chunk.begin(), chunk.end());
    const io::Json response = client_->post("/v1/sentiments", request);
    try {
      if (response.at("labels").get<std::vector<std::string>>() != canonical_label_order()) {
        throw ProviderError("sentiment response label order differs from the canonical vocabulary");
      }
      const io::Json& rows = response.at("probabilities");
      if (rows.size() != chunk.size()) {
        throw ProviderError("sentiment response has " + std::to_string(rows.size()) +
                            " rows for " + std::to_string(chunk.size()) + " texts");
      }
      for (const auto& row : rows) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != kNumLabels) {
          throw ProviderError("sentiment row of length " + std::to_string(values.size()) +
                              ", expected " + std::to_string(kNumLabels));
        }
        out.emplace_back(Eigen::Map<const SentimentProbabilities>(values.data()));
      }
    } catch (const io::Json::exception& e) {
      throw ProviderError(std::string("malformed sentiment response: ") + e.what());
    }
  }
  return out;
}

// --- translation -------------------------------------------------------------

HttpTranslationProvider::HttpTranslationProvider(ProviderConfig config, std::string source_lang,
                                                 std::string target_lang)
    // translate_batch owns retries for translation, so the transport makes one attempt.
    : client_(std::make_unique<HttpInferenceClient>(std::move(config), real_sleeper(), false)),
      source_lang_(std::move(source_lang)),
      target_lang_(std::move(target_lang)) {}

HttpTranslationProvider::~HttpTranslationProvider() = default;

std::string HttpTranslationProvider::id() const { return "http:" + client_->endpoint(); }

std::vector<TranslationOutcome> HttpTranslationProvider::translate(
    std::span<const std::string> texts) const {
  io::Json request;
  request["source_lang"] = source_lang_;
  request["target_lang"] = target_lang_;
  request["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  const io::Json response = client_->post("/translate", request);
  std::vector<TranslationOutcome> out;
  try {
    const io::Json& translations = response.at("translations");
    if (translations.size() != texts.size()) {
      throw ProviderError("translation response has " + std::to_string(translations.size()) +
                          " entries for " + std::to_string(texts.size()) + " texts");
    }
    for (const auto& item : translations) {
      if (!item.is_string() || item.get<std::string>().empty()) {
        out.push_back({std::nullopt, "provider returned no translation"});
      } else {
        out.push_back({item.get<std::string>(), {}});
      }
    }
  } catch (const io::Json::exception& e) {
    throw ProviderError(std::string("malformed translation response: ") + e.what());
  }
  return out;
}

}  // namespace verse_eval
