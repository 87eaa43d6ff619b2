#include "verse_eval/acquire.hpp"

#include <algorithm>
#include <atomic>
#include <ctime>
#include <exception>
#include <fstream>
#include <thread>

#include "verse_eval/io.hpp"
#include "verse_eval/unicode.hpp"

namespace verse_eval {

TranslationCache::TranslationCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(*path_)) {
    return;
  }
  io::for_each_json_line(*path_, [&](const io::Json& record, std::size_t) {
    entries_[{record.at("provider").get<std::string>(),
              unicode::nfc(record.at("source").get<std::string>())}] =
        record.at("translation").get<std::string>();
  });
}

std::optional<std::string> TranslationCache::lookup(const std::string& provider_id,
                                                    const std::string& source) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find({provider_id, unicode::nfc(source)});
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void TranslationCache::insert(const std::string& provider_id, const std::string& source,
                              const std::string& translation) {
  const std::string key = unicode::nfc(source);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = entries_.insert_or_assign({provider_id, key}, translation);
  (void)it;
  if (!path_ || !inserted) {
    return;
  }
  if (path_->has_parent_path()) {
    std::filesystem::create_directories(path_->parent_path());
  }
  std::ofstream out(*path_, std::ios::binary | std::ios::app);
  io::OrderedJson record;
  record["provider"] = provider_id;
  record["source"] = key;
  record["translation"] = translation;
  out << io::dump_line(record) << '\n';
  if (!out) {
    throw Error("cannot append to translation cache " + path_->string());
  }
}

std::size_t TranslationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

RateLimiter::RateLimiter(double requests_per_second, Sleeper sleep, Now now)
    : interval_(requests_per_second > 0.0 ? 1.0 / requests_per_second : 0.0),
      sleep_(std::move(sleep)),
      now_(std::move(now)) {}

void RateLimiter::acquire() {
  if (interval_.count() <= 0.0) {
    return;
  }
  std::chrono::duration<double> wait{0.0};
  {
    std::lock_guard lock(mutex_);
    const auto now = now_();
    auto slot = now;
    if (next_ && *next_ > now) {
      slot = *next_;
    }
    next_ = slot + std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval_);
    wait = slot - now;
  }
  if (wait.count() > 0.0) {
    sleep_(wait);
  }
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
  const std::time_t seconds = std::chrono::system_clock::to_time_t(t);
  std::tm parts{};
  gmtime_r(&seconds, &parts);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buffer;
}

namespace {

bool blank(const std::string& text) {
  return std::all_of(text.begin(), text.end(),
                     [](unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); });
}

}  // namespace

std::vector<TranslationRecord> translate_batch(
    const TranslationProvider& provider, const std::vector<std::pair<VerseRef, std::string>>& sources,
    TranslationCache* cache, const TranslateOptions& options) {
  if (sources.empty()) {
    throw ValidationError("translate_batch: no sources given");
  }
  if (options.batch_size == 0 || options.parallelism == 0) {
    throw std::invalid_argument("batch_size and parallelism must be >= 1");
  }
  const std::string provider_id = provider.id();
  const std::string stamp = iso8601_utc(options.clock());

  std::vector<TranslationRecord> records(sources.size());
  std::vector<std::string> pending;  // distinct uncached NFC texts, first-seen order
  std::map<std::string, std::vector<std::size_t>> waiting;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    TranslationRecord& record = records[i];
    record.ref = sources[i].first;
    record.source_text = sources[i].second;
    record.provider_id = provider_id;
    record.retrieved_at = stamp;
    if (blank(record.source_text)) {
      record.error = "empty source text";
      continue;
    }
    const std::string key = unicode::nfc(record.source_text);
    if (cache != nullptr) {
      if (auto hit = cache->lookup(provider_id, key)) {
        record.translated_text = *hit;
        record.from_cache = true;
        continue;
      }
    }
    auto& slots = waiting[key];
    if (slots.empty()) {
      pending.push_back(key);
    }
    slots.push_back(i);
  }

  const std::size_t batches = (pending.size() + options.batch_size - 1) / options.batch_size;
  std::vector<std::vector<TranslationOutcome>> results(batches);
  std::vector<std::exception_ptr> failures(batches);
  RateLimiter limiter(options.requests_per_second, options.sleep);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (std::size_t b = next++; b < batches && !failed; b = next++) {
      const std::size_t begin = b * options.batch_size;
      const std::size_t count = std::min(options.batch_size, pending.size() - begin);
      const std::span<const std::string> texts(pending.data() + begin, count);
      try {
        results[b] = with_retry(options.retry, options.sleep, [&] {
          limiter.acquire();
          return provider.translate(texts);
        });
        if (results[b].size() != count) {
          throw ProviderError("translation provider returned " +
                              std::to_string(results[b].size()) + " results for " +
                              std::to_string(count) + " texts");
        }
      } catch (...) {
        failures[b] = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t threads = std::min(options.parallelism, batches);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }

  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t j = 0; j < results[b].size(); ++j) {
      const std::string& key = pending[b * options.batch_size + j];
      const TranslationOutcome& outcome = results[b][j];
      const bool ok = outcome.ok() && !outcome.text->empty();
      if (ok && cache != nullptr) {
        cache->insert(provider_id, key, *outcome.text);
      }
      for (std::size_t index : waiting[key]) {
        if (ok) {
          records[index].translated_text = *outcome.text;
        } else {
          records[index].error = outcome.error.empty() ? "empty translation" : outcome.error;
        }
      }
    }
  }
  return records;
}

ParallelCorpus build_parallel_corpus(const TranslationCorpus& source,
                                     const TranslationProvider& provider, const std::string& id,
                                     const std::string& target_language, TranslationCache* cache,
                                     const TranslateOptions& options) {
  if (source.empty()) {
    throw ValidationError("source corpus '" + source.id() + "' has no verses");
  }
  std::vector<std::pair<VerseRef, std::string>> inputs;
  inputs.reserve(source.size());
  for (const auto& [ref, verse] : source.verses()) {
    inputs.emplace_back(ref, verse.clean_text);
  }
  ParallelCorpus out{TranslationCorpus(id, source.title() + " (machine translation)", provider.id(),
                                       target_language, "translated from '" + source.id() + "'"),
                     translate_batch(provider, inputs, cache, options),
                     {}};
  for (const auto& record : out.records) {
    if (!record.ok()) {
      out.warnings.push_back({record.ref, "translation failed: " + record.error});
      continue;
    }
    std::string text = clean_verse(record.translated_text);
    if (text.empty()) {
      out.warnings.push_back({record.ref, "translation is empty after cleaning"});
      continue;
    }
    out.corpus.add(make_verse(record.ref, std::move(text), source.find(record.ref)->raw_text));
  }
  return out;
}

}  // namespace verse_eval
