#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "verse_eval/io.hpp"
#include "verse_eval/sentiment.hpp"
#include "verse_eval/textstats.hpp"

using namespace verse_eval;

namespace {

TranslationCorpus corpus_of(const std::vector<std::string>& texts, int chapter = 1) {
  TranslationCorpus corpus("C", "t", "x", "en");
  int verse = 0;
  for (const auto& text : texts) corpus.add(make_verse({chapter, ++verse}, text));
  return corpus;
}

}  // namespace

TEST_SUITE("textstats") {

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("On Me set your mind, on Me rest your conviction;") ==
        TokenSequence{"on", "me", "set", "your", "mind", "on", "me", "rest", "your", "conviction"});
}

TEST_CASE("tokenize keeps inner apostrophes and hyphens") {
  CHECK(tokenize("self-control isn't 'quoted' -edge-") ==
        TokenSequence{"self-control", "isn't", "quoted", "edge"});
}

TEST_CASE("tokenize drops all-digit tokens but keeps mixed ones") {
  CHECK(tokenize("chapter 12 has 2nd verse १२") == TokenSequence{"chapter", "has", "2nd", "verse"});
}

TEST_CASE("tokenize handles Devanagari words") {
  CHECK(tokenize("मय्येव मन आधत्स्व ।") == TokenSequence{"मय्येव", "मन", "आधत्स्व"});
}

TEST_CASE("stoplist parsing and removal") {
  const Stoplist stop = parse_stoplist("# comment\nThe\n  of \n\nand\r\n");
  CHECK(stop == Stoplist{"and", "of", "the"});
  CHECK(remove_stopwords({"the", "fruit", "of", "action"}, stop) == TokenSequence{"fruit", "action"});
  CHECK(default_stoplist().count("the") == 1);
  CHECK(default_stoplist().count("renunciation") == 0);
}

TEST_CASE("ngram table counts sliding windows") {
  NGramTable table(2);
  table.add_sequence({"a", "b", "a", "b"});
  table.add_sequence({"b"});
  CHECK(table.count({"a", "b"}) == 2);
  CHECK(table.count({"b", "a"}) == 1);
  CHECK(table.total() == 3);
  CHECK_THROWS(NGramTable(0));
}

TEST_CASE("top_ngrams never spans verses") {
  const auto corpus = corpus_of({"alpha beta", "gamma delta"});
  const auto ranked = top_ngrams(corpus, 2, 10, Stoplist{});
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].joined() == "alpha beta");
  CHECK(ranked[1].joined() == "gamma delta");
}

TEST_CASE("top_ngrams orders by count then lexicographically") {
  const auto corpus = corpus_of({"b c b c", "a d", "a d"});
  const auto ranked = top_ngrams(corpus, 2, 3, Stoplist{});
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].joined() == "a d");
  CHECK(ranked[0].count == 2);
  CHECK(ranked[1].joined() == "b c");
  CHECK(ranked[2].joined() == "c b");
}

TEST_CASE("top_ngrams removes stopwords before windowing") {
  const auto corpus = corpus_of({"the fruit of the action"});
  const auto ranked = top_ngrams(corpus, 2, 10, default_stoplist());
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0].joined() == "fruit action");
}

TEST_CASE("top_ngrams matches the sliding-window oracle") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "ab", "ba"};
  std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
  std::uniform_int_distribution<int> verses(1, 20);
  std::uniform_int_distribution<int> length(0, 12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<std::string>> tokens;
    std::vector<std::string> texts;
    for (int v = verses(rng); v > 0; --v) {
      std::vector<std::string> t;
      for (int i = length(rng); i > 0; --i) t.push_back(vocab[word(rng)]);
      if (t.empty()) t.push_back("a");
      std::string text;
      for (const auto& w : t) text += (text.empty() ? "" : " ") + w;
      tokens.push_back(t);
      texts.push_back(text);
    }
    const auto corpus = corpus_of(texts);
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto expected = oracle::top_ngrams(tokens, n, 8);
      const auto actual = top_ngrams(corpus, n, 8, Stoplist{});
      REQUIRE(actual.size() == expected.size());
      for (std::size_t i = 0; i < actual.size(); ++i) {
        CHECK(actual[i].gram == expected[i].tokens);
        CHECK(actual[i].count == expected[i].count);
      }
    }
  }
}

TEST_CASE("ngram counts add up to the number of windows") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    NGramTable table(2);
    std::size_t windows = 0;
    for (int v = 0; v < 10; ++v) {
      TokenSequence seq;
      for (int i = static_cast<int>(rng() % 8); i > 0; --i) seq.push_back(testing::random_word(rng, "xyz", 2));
      windows += seq.size() >= 2 ? seq.size() - 1 : 0;
      table.add_sequence(seq);
    }
    CHECK(table.total() == windows);
    for (const auto& [gram, count] : table.counts()) {
      CHECK(gram.size() == 2);
      CHECK(count >= 1);
    }
  }
}

TEST_CASE("sentiment-conditioned ngrams are a subset of the corpus ngrams") {
  const auto corpus = corpus_of({"peace follows renunciation", "fear and anger", "peace follows calm"});
  SentimentPredictions preds("C", 0.5);
  SentimentProbabilities on = SentimentProbabilities::Constant(0.1);
  on[index_of(SentimentLabel::optimistic)] = 0.9;
  const SentimentProbabilities off = SentimentProbabilities::Constant(0.1);
  preds.add({1, 1}, on);
  preds.add({1, 2}, off);
  // verse 1.3 has no prediction
  const auto result = sentiment_conditioned_ngrams(corpus, preds, "optimistic", 2, 10, Stoplist{});
  REQUIRE(result.ranked.size() == 2);
  CHECK(result.ranked[0].joined() == "follows renunciation");
  CHECK(result.ranked[1].joined() == "peace follows");
  CHECK(result.warnings.size() == 1);
  const auto all = top_ngrams(corpus, 2, 100, Stoplist{});
  for (const auto& gram : result.ranked) {
    const auto it = std::find_if(all.begin(), all.end(), [&](const auto& g) { return g.gram == gram.gram; });
    REQUIRE(it != all.end());
    CHECK(gram.count <= it->count);
  }
  CHECK_THROWS(sentiment_conditioned_ngrams(corpus, preds, "official report", 2, 10, Stoplist{}));
}

TEST_CASE("ngrams csv") {
  CHECK(ngrams_to_csv({{{"fruit", "action"}, 3}, {{"a,b", "c"}, 1}}) ==
        "ngram,count\nfruit action,3\n\"a,b c\",1\n");
}

}  // TEST_SUITE
