#include <doctest.h>

#include <atomic>
#include <random>
#include <set>

#include "support.hpp"
#include "verse_eval/acquire.hpp"
#include "verse_eval/io.hpp"

using namespace verse_eval;

namespace {

// Wraps a provider, counting calls and texts, optionally failing chosen texts.
class CountingProvider final : public TranslationProvider {
 public:
  explicit CountingProvider(const TranslationProvider& inner, std::set<std::string> fail = {})
      : inner_(inner), fail_(std::move(fail)) {}
  std::string id() const override { return inner_.id(); }
  std::vector<TranslationOutcome> translate(std::span<const std::string> texts) const override {
    ++calls;
    items += texts.size();
    auto out = inner_.translate(texts);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (fail_.count(texts[i]) != 0) out[i] = {std::nullopt, "refused"};
    }
    return out;
  }

  mutable std::atomic<int> calls{0};
  mutable std::atomic<std::size_t> items{0};

 private:
  const TranslationProvider& inner_;
  std::set<std::string> fail_;
};

class DownProvider final : public TranslationProvider {
 public:
  std::string id() const override { return "down"; }
  std::vector<TranslationOutcome> translate(std::span<const std::string>) const override {
    ++calls;
    throw ProviderUnavailable("connection refused");
  }
  mutable std::atomic<int> calls{0};
};

TranslateOptions quick() {
  TranslateOptions options;
  options.requests_per_second = 0;
  options.sleep = [](auto) {};
  options.clock = [] { return std::chrono::system_clock::time_point(std::chrono::seconds(1700000000)); };
  return options;
}

TranslationCorpus sanskrit() { return load_corpus(testing::fixtures() / "corpora" / "Sanskrit"); }

}  // namespace

TEST_SUITE("acquire") {

TEST_CASE("replay fixture reproduces the recorded translation") {
  const ReplayTranslationProvider replay(testing::fixtures() / "translation_replay.jsonl");
  const auto records = translate_batch(
      replay,
      {{{12, 8}, "mayy eva mana ādhatsva mayi buddhiṃ niveśaya nivasiṣyasi mayy eva ata ūrdhvaṃ na saṃśayaḥ"}},
      nullptr, quick());
  REQUIRE(records.size() == 1);
  CHECK(records[0].ok());
  CHECK(records[0].translated_text.rfind("Concentrate on Me in Me in Me, fix your mind on Me", 0) == 0);
  CHECK(records[0].provider_id == "replay");
  CHECK(records[0].retrieved_at == "2023-11-14T22:13:20Z");
}

TEST_CASE("a repeated run is served entirely from the cache") {
  const MockTranslationProvider mock;
  CountingProvider provider(mock);
  TranslationCache cache;
  const std::vector<std::pair<VerseRef, std::string>> sources = {
      {{1, 1}, "a"}, {{1, 2}, "b"}, {{1, 3}, "a"}};
  const auto first = translate_batch(provider, sources, &cache, quick());
  CHECK(provider.items == 2);  // the duplicate reaches the provider once
  CHECK(cache.size() == 2);
  const int calls = provider.calls;
  const auto second = translate_batch(provider, sources, &cache, quick());
  CHECK(provider.calls == calls);
  for (std::size_t i = 0; i < second.size(); ++i) {
    CHECK(second[i].from_cache);
    CHECK(second[i].translated_text == first[i].translated_text);
  }
}

TEST_CASE("the file-backed cache persists across instances") {
  const auto dir = testing::scratch("cache_file");
  const MockTranslationProvider mock;
  {
    TranslationCache cache(dir / "cache.jsonl");
    translate_batch(mock, {{{1, 1}, "dharma"}}, &cache, quick());
  }
  TranslationCache reloaded(dir / "cache.jsonl");
  CHECK(reloaded.size() == 1);
  CHECK(reloaded.lookup("mock", "dharma") == std::optional<std::string>("[en] dharma"));
  CHECK_FALSE(reloaded.lookup("other", "dharma"));
}

TEST_CASE("100 random strings keep their order") {
  std::mt19937_64 rng(42);
  std::vector<std::pair<VerseRef, std::string>> sources;
  for (int i = 1; i <= 100; ++i) sources.push_back({{1 + i / 50, i}, testing::random_word(rng, "abcde .-", 10) + "x"});
  TranslateOptions options = quick();
  options.batch_size = 7;
  options.parallelism = 4;
  const MockTranslationProvider mock;
  const auto records = translate_batch(mock, sources, nullptr, options);
  REQUIRE(records.size() == 100);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].ref == sources[i].first);
    CHECK(records[i].translated_text == "[en] " + sources[i].second);
  }
}

TEST_CASE("item failures are recorded without aborting the batch") {
  const MockTranslationProvider mock;
  const auto records = translate_batch(mock, {{{1, 1}, "a"}, {{1, 2}, " "}, {{1, 3}, "c"}}, nullptr, quick());
  REQUIRE(records.size() == 3);
  CHECK(records[0].ok());
  CHECK_FALSE(records[1].ok());
  CHECK(records[1].translated_text.empty());
  CHECK(records[2].ok());
  CHECK_THROWS_AS(translate_batch(mock, {}, nullptr, quick()), ValidationError);
}

TEST_CASE("an unreachable provider raises after the retry budget") {
  DownProvider down;
  std::vector<double> waits;
  TranslateOptions options = quick();
  options.sleep = [&](std::chrono::duration<double> d) { waits.push_back(d.count()); };
  options.parallelism = 1;
  CHECK_THROWS_AS(translate_batch(down, {{{1, 1}, "a"}}, nullptr, options), ProviderUnavailable);
  CHECK(down.calls == 3);
  CHECK(waits == std::vector<double>{0.5, 1.0});
}

TEST_CASE("rate limiter spaces requests on a fake clock") {
  using namespace std::chrono;
  steady_clock::time_point now{};
  std::vector<double> waits;
  RateLimiter limiter(
      4.0,
      [&](duration<double> d) {
        waits.push_back(d.count());
        now += duration_cast<steady_clock::duration>(d);
      },
      [&] { return now; });
  limiter.acquire();
  limiter.acquire();
  limiter.acquire();
  CHECK(waits == std::vector<double>{0.25, 0.25});
  now += seconds(10);
  limiter.acquire();
  CHECK(waits.size() == 2);

  RateLimiter off(0.0, [&](auto) { FAIL("disabled limiter slept"); });
  off.acquire();
  off.acquire();
}

TEST_CASE("iso8601 formatting") {
  CHECK(iso8601_utc(std::chrono::system_clock::time_point{}) == "1970-01-01T00:00:00Z");
}

TEST_CASE("parallel corpus from the Sanskrit fixture via replay") {
  const TranslationCorpus source = sanskrit();
  const ReplayTranslationProvider replay(testing::fixtures() / "translation_replay.jsonl");
  const ParallelCorpus result = build_parallel_corpus(source, replay, "GT", "en", nullptr, quick());
  CHECK(result.warnings.empty());
  REQUIRE(result.corpus.size() == source.size());
  const TranslationCorpus gt = load_corpus(testing::fixtures() / "corpora" / "GT");
  for (const auto& [ref, verse] : result.corpus.verses()) {
    REQUIRE(verse.source_text);
    CHECK(*verse.source_text == source.find(ref)->raw_text);
    CHECK(verse.clean_text == gt.find(ref)->clean_text);
  }
  CHECK(result.corpus.id() == "GT");
  CHECK(result.corpus.language() == "en");
}

TEST_CASE("a failing verse is left out with a warning naming it") {
  TranslationCorpus source("S", "t", "x", "sa");
  source.add(make_verse({1, 1}, "one"));
  source.add(make_verse({1, 2}, "two"));
  source.add(make_verse({2, 1}, "three"));
  const MockTranslationProvider mock;
  const CountingProvider failing(mock, {"two"});
  const ParallelCorpus result = build_parallel_corpus(source, failing, "MT", "en", nullptr, quick());
  CHECK(result.corpus.size() == 2);
  CHECK_FALSE(result.corpus.contains({1, 2}));
  REQUIRE(result.warnings.size() == 1);
  REQUIRE(result.warnings[0].ref);
  CHECK(*result.warnings[0].ref == VerseRef{1, 2});
  CHECK(result.records.size() == 3);
}

}  // TEST_SUITE
