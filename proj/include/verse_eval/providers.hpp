#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "verse_eval/common.hpp"
#include "verse_eval/labels.hpp"

namespace verse_eval {

using EmbeddingVector = Eigen::VectorXd;

/// Transport-level failure (connection refused, timeout, 5xx). Retryable.
class ProviderUnavailable : public ProviderError {
 public:
  using ProviderError::ProviderError;
};

// Provider contracts. Output i always corresponds to input i, and every
// realization is safe to share between concurrent callers.

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string model_id() const = 0;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const = 0;
};

class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual std::string model_id() const = 0;
  virtual std::vector<SentimentProbabilities> predict(std::span<const std::string> texts) const = 0;
};

/// Per-item translation result: either text or an error message.
struct TranslationOutcome {
  std::optional<std::string> text;
  std::string error;

  bool ok() const { return text.has_value(); }
};

class TranslationProvider {
 public:
  virtual ~TranslationProvider() = default;
  virtual std::string id() const = 0;
  /// Throws ProviderUnavailable on transport failure; item-level failures
  /// are reported through TranslationOutcome::error.
  virtual std::vector<TranslationOutcome> translate(std::span<const std::string> texts) const = 0;
};

enum class ProviderKind { mock, file, http };

std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view name);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::mock;
  std::string endpoint;               // http only
  std::filesystem::path file_path;    // file only
  std::size_t batch_size = 32;
  std::chrono::duration<double> timeout{30.0};
  int max_retries = 2;  // attempts = 1 + max_retries
  std::size_t max_in_flight = 4;

  /// Throws ValidationError unless exactly the fields of `kind` are set.
  void validate() const;
};

/// Bounded exponential backoff: waits initial, initial*multiplier, ... capped
/// at max_backoff between attempts.
struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::duration<double> initial_backoff{0.5};
  double multiplier = 2.0;
  std::chrono::duration<double> max_backoff{2.0};

  std::chrono::duration<double> backoff_before(int attempt) const;
};

using Sleeper = std::function<void(std::chrono::duration<double>)>;
Sleeper real_sleeper();

/// Runs `call`, retrying on ProviderUnavailable per `policy`; rethrows the
/// last failure once attempts are exhausted.
template <typename F>
auto with_retry(const RetryPolicy& policy, const Sleeper& sleep, F&& call) -> decltype(call()) {
  for (int attempt = 1;; ++attempt) {
    try {
      return call();
    } catch (const ProviderUnavailable&) {
      if (attempt >= policy.max_attempts) {
        throw;
      }
      sleep(policy.backoff_before(attempt + 1));
    }
  }
}

// --- mock realizations -----------------------------------------------------

inline constexpr int kMockEmbeddingDim = 16;

/// Hashed bag-of-words vector of the NFC text: identical text gives identical
/// bytes on every platform, shared words raise cosine similarity, and the
/// zero vector is never produced.
EmbeddingVector mock_embedding(std::string_view text);

class MockEmbeddingProvider final : public EmbeddingProvider {
 public:
  std::string model_id() const override { return "mock-hash-bow-16"; }
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;
};

/// Keyword-lexicon sentiment scores; see data/sentiment_lexicon.tsv.
SentimentProbabilities mock_sentiment(std::string_view text);

class MockSentimentProvider final : public SentimentProvider {
 public:
  std::string model_id() const override { return "mock-lexicon-v1"; }
  std::vector<SentimentProbabilities> predict(std::span<const std::string> texts) const override;
};

/// Deterministic stand-in translation ("[<target>] " + text); fails items
/// that are empty after trimming.
class MockTranslationProvider final : public TranslationProvider {
 public:
  explicit MockTranslationProvider(std::string target_lang = "en");
  std::string id() const override { return "mock"; }
  std::vector<TranslationOutcome> translate(std::span<const std::string> texts) const override;

 private:
  std::string target_lang_;
};

// --- file realizations -----------------------------------------------------

/// Precomputed embeddings keyed by exact NFC text. Store layout: JSONL header
/// {"model_id", "dim"} then {"text", "vector"} per line.
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FileEmbeddingProvider(const std::filesystem::path& store);
  std::string model_id() const override { return model_id_; }
  int dim() const { return dim_; }
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

 private:
  std::string model_id_;
  int dim_ = 0;
  std::map<std::string, EmbeddingVector> entries_;  // keyed by NFC text
};

void write_embedding_store(const std::filesystem::path& store, const std::string& model_id,
                           std::span<const std::string> texts,
                           std::span<const EmbeddingVector> vectors);

/// Precomputed probabilities keyed by exact NFC text. Store layout: JSONL
/// header {"model_id", "label_order"} then {"text", "probabilities"}.
class FileSentimentProvider final : public SentimentProvider {
 public:
  explicit FileSentimentProvider(const std::filesystem::path& store);
  std::string model_id() const override { return model_id_; }
  std::vector<SentimentProbabilities> predict(std::span<const std::string> texts) const override;

 private:
  std::string model_id_;
  std::map<std::string, SentimentProbabilities> entries_;  // keyed by NFC text
};

void write_sentiment_store(const std::filesystem::path& store, const std::string& model_id,
                           std::span<const std::string> texts,
                           std::span<const SentimentProbabilities> rows);

/// Replays recorded translations from a JSONL fixture of
/// {"source", "translation"} records; unknown sources are item errors.
class ReplayTranslationProvider final : public TranslationProvider {
 public:
  explicit ReplayTranslationProvider(const std::filesystem::path& fixture,
                                     std::string provider_id = "replay");
  std::string id() const override { return provider_id_; }
  std::vector<TranslationOutcome> translate(std::span<const std::string> texts) const override;

 private:
  std::string provider_id_;
  std::map<std::string, std::string> entries_;  // keyed by NFC source
};

// --- http realizations -----------------------------------------------------

/// Model identities reported by the inference service health endpoint.
struct ServiceInfo {
  std::string embedding_model;
  std::string sentiment_model;
  int embedding_dim = 0;
  std::vector<std::string> label_order;
};

class HttpInferenceClient;

class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(ProviderConfig config, Sleeper sleep = real_sleeper());
  ~HttpEmbeddingProvider() override;
  std::string model_id() const override;
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override;

 private:
  std::unique_ptr<HttpInferenceClient> client_;
};

class HttpSentimentProvider final : public SentimentProvider {
 public:
  explicit HttpSentimentProvider(ProviderConfig config, Sleeper sleep = real_sleeper());
  ~HttpSentimentProvider() override;
  std::string model_id() const override;
  std::vector<SentimentProbabilities> predict(std::span<const std::string> texts) const override;

 private:
  std::unique_ptr<HttpInferenceClient> client_;
};

/// Generic REST translation backend: POST <endpoint>/translate.
class HttpTranslationProvider final : public TranslationProvider {
 public:
  HttpTranslationProvider(ProviderConfig config, std::string source_lang, std::string target_lang);
  ~HttpTranslationProvider() override;
  std::string id() const override;
  std::vector<TranslationOutcome> translate(std::span<const std::string> texts) const override;

 private:
  std::unique_ptr<HttpInferenceClient> client_;
  std::string source_lang_;
  std::string target_lang_;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& config);
std::unique_ptr<SentimentProvider> make_sentiment_provider(const ProviderConfig& config);
std::unique_ptr<TranslationProvider> make_translation_provider(const ProviderConfig& config,
                                                               const std::string& source_lang,
                                                               const std::string& target_lang);

}  // namespace verse_eval
