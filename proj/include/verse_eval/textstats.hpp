#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "verse_eval/common.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/labels.hpp"

namespace verse_eval {

class SentimentPredictions;

using TokenSequence = std::vector<std::string>;
using Stoplist = std::set<std::string, std::less<>>;

/// Lowercases and splits on whitespace and punctuation. Apostrophes and
/// hyphens inside a word are kept, stripped at its edges; all-digit tokens
/// are dropped.
TokenSequence tokenize(std::string_view text);

TokenSequence remove_stopwords(const TokenSequence& tokens, const Stoplist& stoplist);

/// The bundled English stoplist (data/stopwords_en.txt).
const Stoplist& default_stoplist();
/// One token per line; blank lines and lines starting with '#' are ignored.
Stoplist load_stoplist(const std::filesystem::path& path);
Stoplist parse_stoplist(std::string_view text);

using NGram = std::vector<std::string>;

/// n-gram counts; every key has exactly n tokens and every count is >= 1.
class NGramTable {
 public:
  explicit NGramTable(std::size_t n);

  std::size_t n() const { return n_; }
  /// Counts the sliding windows of one token sequence.
  void add_sequence(const TokenSequence& tokens);
  void merge(const NGramTable& other);

  std::size_t count(const NGram& gram) const;
  std::size_t total() const;
  const std::map<NGram, std::size_t>& counts() const { return counts_; }

 private:
  std::size_t n_;
  std::map<NGram, std::size_t> counts_;
};

struct NGramCount {
  NGram gram;
  std::size_t count = 0;

  std::string joined() const;
  friend bool operator==(const NGramCount&, const NGramCount&) = default;
};

/// Descending by count, ties broken lexicographically, at most k entries.
std::vector<NGramCount> rank_ngrams(const NGramTable& table, std::size_t k);

/// Per-verse tokens of the clean text with stopwords removed (unless the
/// stoplist is empty).
TokenSequence verse_tokens(const Verse& verse, const Stoplist& stoplist);

/// n-grams aggregated over every verse of the corpus; never spans verses.
std::vector<NGramCount> top_ngrams(const TranslationCorpus& corpus, std::size_t n, std::size_t k,
                                   const Stoplist& stoplist);

struct ConditionedNGrams {
  std::vector<NGramCount> ranked;
  Warnings warnings;
};

/// top_ngrams restricted to verses whose label set contains `label`. Verses
/// without a prediction are skipped with a warning.
ConditionedNGrams sentiment_conditioned_ngrams(const TranslationCorpus& corpus,
                                               const SentimentPredictions& predictions,
                                               SentimentLabel label, std::size_t n, std::size_t k,
                                               const Stoplist& stoplist);
/// Same, with the label given by name; unknown names throw.
ConditionedNGrams sentiment_conditioned_ngrams(const TranslationCorpus& corpus,
                                               const SentimentPredictions& predictions,
                                               std::string_view label, std::size_t n,
                                               std::size_t k, const Stoplist& stoplist);

/// CSV with columns `ngram,count`.
std::string ngrams_to_csv(const std::vector<NGramCount>& ranked);

}  // namespace verse_eval
