#include <doctest.h>

#include <random>

#include "support.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/io.hpp"
#include "verse_eval/unicode.hpp"

using namespace verse_eval;

TEST_SUITE("corpus") {

TEST_CASE("clean_verse strips trailing verse numbers and joins lines") {
  CHECK(clean_verse("Dhritarashtra said:\nO Sanjaya, 1.1") == "Dhritarashtra said: O Sanjaya,");
  CHECK(clean_verse("  \n 1 2 3 \n ") == "");
  CHECK(clean_verse("") == "");
}

TEST_CASE("clean_verse removes wrapped Devanagari numbering") {
  CHECK(clean_verse("तदात्मानं सृजाम्यहम् ॥४-७॥") == "तदात्मानं सृजाम्यहम्");
  CHECK(clean_verse("न संशयः ॥ १२.८ ॥") == "न संशयः");
  CHECK(clean_verse("न संशयः || 12.8 ||") == "न संशयः");
}

TEST_CASE("clean_verse keeps digits attached to words") {
  CHECK(clean_verse("the 2nd chapter, 47th verse 2.47") == "the 2nd chapter, 47th verse");
}

TEST_CASE("clean_verse composes to NFC") {
  // "ṛ" and "ā" given as base letter plus combining mark.
  CHECK(clean_verse("Pr\u0323tha\u0304") == "P\u1e5bth\u0101");
}

TEST_CASE("clean_verse keeps sentence punctuation and drops symbols") {
  CHECK(clean_verse("“Which are better?” [8]") == "Which are better?");
  CHECK(clean_verse("self-control; te 'tīva (3.13)") == "self-control; te 'tīva");
}

TEST_CASE("bundled cleaning samples match their golden output") {
  int samples = 0;
  io::for_each_json_line(testing::fixtures() / "cleaning_samples.jsonl",
                         [&](const io::Json& record, std::size_t line) {
                           ++samples;
                           const auto raw = record.at("raw").get<std::string>();
                           const auto expected = record.at("expected").get<std::string>();
                           INFO("line " << line);
                           CHECK(clean_verse(raw) == expected);
                         });
  CHECK(samples == 20);
}

TEST_CASE("clean_verse is total and idempotent on random input") {
  const std::vector<std::string> pieces = {
      "a",  "Z",    "q",  "१",    "3",  "42", ".",      "-",        "||",   "।",
      "॥",  " ",    "\n", "\r\n", "ā",  "a\u0304", "क",   "्",    "ं",
      "'",  "’",    "—",  "“",    "\t", "\xff", "\u200d", "(", "é",   ",",
      "?",  "\u00a0", ":", "–",  "7-8", "१-१", "\u2003", "x1", "9z"};
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 24);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string raw;
    for (int i = len(rng); i > 0; --i) {
      raw += pieces[pick(rng)];
    }
    const std::string once = clean_verse(raw);
    INFO("raw: " << raw);
    CHECK(clean_verse(once) == once);
    CHECK(once.find('\n') == std::string::npos);
    CHECK(once.find("  ") == std::string::npos);
    if (!once.empty()) {
      CHECK(once.front() != ' ');
      CHECK(once.back() != ' ');
    }
    CHECK(unicode::nfc(once) == once);
  }
}

TEST_CASE("make_verse derives clean text") {
  const Verse v = make_verse({3, 13}, "Those who eat 3.13", std::string("yajña"));
  CHECK(v.clean_text == "Those who eat");
  CHECK(v.raw_text == "Those who eat 3.13");
  REQUIRE(v.source_text);
  CHECK(*v.source_text == "yajña");
}

TEST_CASE("corpus rejects duplicates and empty text") {
  TranslationCorpus corpus("GT", "t", "x", "en");
  corpus.add(make_verse({1, 1}, "one"));
  CHECK_THROWS_AS(corpus.add(make_verse({1, 1}, "again")), ValidationError);
  CHECK_THROWS_AS(corpus.add(make_verse({1, 2}, "")), ValidationError);
  CHECK(corpus.size() == 1);
}

TEST_CASE("corpus ids") {
  CHECK(is_valid_corpus_id("GT"));
  CHECK(is_valid_corpus_id("Gandhi-2"));
  CHECK_FALSE(is_valid_corpus_id(""));
  CHECK_FALSE(is_valid_corpus_id("a b"));
  CHECK_FALSE(is_valid_corpus_id("a/b"));
}

TEST_CASE("align pairs shared refs and warns about the rest") {
  TranslationCorpus left("L", "t", "x", "en");
  TranslationCorpus right("R", "t", "x", "en");
  for (int v : {1, 2, 3, 5}) left.add(make_verse({1, v}, "l" + std::to_string(v)));
  for (int v : {2, 3, 4, 5}) right.add(make_verse({1, v}, "r" + std::to_string(v)));
  const Alignment a = align(left, right);
  REQUIRE(a.pairs.size() == 3);
  CHECK(a.pairs[0].ref == VerseRef{1, 2});
  CHECK(a.pairs[2].ref == VerseRef{1, 5});
  CHECK(a.pairs[1].left->raw_text == "l3");
  CHECK(a.pairs[1].right->raw_text == "r3");
  CHECK(a.warnings.size() == 2);
}

TEST_CASE("align properties on random corpora") {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution keep(0.6);
  for (int trial = 0; trial < 50; ++trial) {
    TranslationCorpus left("L", "t", "x", "en");
    TranslationCorpus right("R", "t", "x", "en");
    std::size_t both = 0;
    std::size_t only = 0;
    for (int c = 1; c <= 3; ++c) {
      for (int v = 1; v <= 10; ++v) {
        const bool l = keep(rng);
        const bool r = keep(rng);
        if (l) left.add(make_verse({c, v}, "x"));
        if (r) right.add(make_verse({c, v}, "y"));
        both += (l && r) ? 1 : 0;
        only += (l != r) ? 1 : 0;
      }
    }
    const Alignment a = align(left, right);
    CHECK(a.pairs.size() == both);
    CHECK(a.warnings.size() == only);
    CHECK(std::is_sorted(a.pairs.begin(), a.pairs.end(),
                         [](const auto& x, const auto& y) { return x.ref < y.ref; }));
    std::size_t sliced = 0;
    for (int c : left.chapters()) {
      const auto verses = chapter_slice(left, c);
      sliced += verses.size();
      for (const auto& verse : verses) CHECK(verse.ref.chapter == c);
    }
    CHECK(sliced == left.size());
  }
}

TEST_CASE("chapter_slice of a missing chapter is empty") {
  TranslationCorpus corpus("GT", "t", "x", "en");
  corpus.add(make_verse({2, 1}, "a"));
  CHECK(chapter_slice(corpus, 3).empty());
}

TEST_CASE("save and load round-trip raw text byte-exact") {
  TranslationCorpus corpus("GT", "Title", "Someone", "en", "src");
  corpus.add(make_verse({12, 8}, "line one\r\nline two ॥ ८ ॥", std::string("mayy eva")));
  corpus.add(make_verse({12, 1}, "  spaced  "));
  const auto dir = testing::scratch("corpus_roundtrip");
  save_corpus(corpus, dir / "GT");
  const TranslationCorpus back = load_corpus(dir / "GT");
  CHECK(back.id() == "GT");
  CHECK(back.translator() == "Someone");
  REQUIRE(back.size() == 2);
  CHECK(back.find({12, 8})->raw_text == "line one\r\nline two ॥ ८ ॥");
  CHECK(*back.find({12, 8})->source_text == "mayy eva");
  CHECK(back.find({12, 1})->clean_text == "spaced");
}

TEST_CASE("load_corpus reports malformed input") {
  const auto dir = testing::scratch("corpus_bad");
  CHECK_THROWS_AS(load_corpus(dir), FormatError);
  io::write_file(dir / "manifest.json", R"({"id":"X","title":"t","translator":"x","language":"en"})");
  io::write_file(dir / "verses.jsonl", "{\"chapter\":1,\"verse\":1,\"text\":\"a\"}\n{oops\n");
  CHECK_THROWS_AS(load_corpus(dir), FormatError);
}

TEST_CASE("bundled fixture corpora load and align") {
  const CorpusSet set = load_corpus_set(testing::fixtures() / "corpora");
  CHECK(set.ids() == std::vector<std::string>{"Easwaran", "GT", "Gandhi", "Purohit", "Sanskrit"});
  const Alignment a = align(set.at("GT"), set.at("Gandhi"));
  CHECK(a.pairs.size() == 8);
  CHECK(a.warnings.empty());
  CHECK(set.at("GT").find({12, 8})->source_text.has_value());
}

}  // TEST_SUITE

