#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "verse_eval/common.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/providers.hpp"

namespace verse_eval {

struct TranslationRecord {
  VerseRef ref;
  std::string source_text;
  std::string translated_text;  // empty when the item failed
  std::string provider_id;
  std::string retrieved_at;     // ISO-8601 UTC
  std::string error;            // non-empty marks a failed item
  bool from_cache = false;

  bool ok() const { return error.empty(); }
};

/// Translations keyed by (provider id, NFC source text). Reads run
/// concurrently; writes are serialized and, for a file-backed cache, appended
/// to the JSONL file as they happen.
class TranslationCache {
 public:
  TranslationCache() = default;
  /// Loads `path` when it exists; later inserts are appended to it.
  explicit TranslationCache(std::filesystem::path path);

  std::optional<std::string> lookup(const std::string& provider_id,
                                    const std::string& source) const;
  void insert(const std::string& provider_id, const std::string& source,
              const std::string& translation);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::optional<std::filesystem::path> path_;
  std::map<std::pair<std::string, std::string>, std::string> entries_;
};

/// Spaces calls at least 1/rate seconds apart. A rate <= 0 disables limiting.
class RateLimiter {
 public:
  using Now = std::function<std::chrono::steady_clock::time_point()>;

  RateLimiter(double requests_per_second, Sleeper sleep,
              Now now = [] { return std::chrono::steady_clock::now(); });
  void acquire();

 private:
  std::chrono::duration<double> interval_;
  Sleeper sleep_;
  Now now_;
  std::mutex mutex_;
  std::optional<std::chrono::steady_clock::time_point> next_;
};

using WallClock = std::function<std::chrono::system_clock::time_point()>;

std::string iso8601_utc(std::chrono::system_clock::time_point t);

struct TranslateOptions {
  std::size_t batch_size = 25;
  std::size_t parallelism = 4;
  double requests_per_second = 5.0;
  RetryPolicy retry;
  Sleeper sleep = real_sleeper();
  WallClock clock = [] { return std::chrono::system_clock::now(); };
};

/// Translates each source in order. The cache is consulted first and only
/// distinct uncached texts reach the provider. Item failures are recorded in
/// the output; a provider that stays unreachable after the retry budget
/// raises ProviderUnavailable. Throws ValidationError on an empty input.
std::vector<TranslationRecord> translate_batch(
    const TranslationProvider& provider, const std::vector<std::pair<VerseRef, std::string>>& sources,
    TranslationCache* cache = nullptr, const TranslateOptions& options = {});

struct ParallelCorpus {
  TranslationCorpus corpus;
  std::vector<TranslationRecord> records;
  Warnings warnings;
};

/// Machine-translated corpus aligned ref-for-ref with `source`. Each verse
/// holds the cleaned translation and carries the source raw text as its
/// original. Failed verses are omitted with a warning.
ParallelCorpus build_parallel_corpus(const TranslationCorpus& source,
                                     const TranslationProvider& provider, const std::string& id,
                                     const std::string& target_language = "en",
                                     TranslationCache* cache = nullptr,
                                     const TranslateOptions& options = {});

}  // namespace verse_eval
