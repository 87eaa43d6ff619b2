#include "verse_eval/textstats.hpp"

#include <algorithm>
#include <numeric>

#include "verse_eval/io.hpp"
#include "verse_eval/sentiment.hpp"
#include "verse_eval/unicode.hpp"
#include "data_stopwords.hpp"

namespace verse_eval {
namespace {

bool is_joiner_mark(char32_t c) {
  return c == U'\'' || c == U'’' || c == U'ʼ' || c == U'-' || c == U'‐' ||
         c == U'‑';
}

bool is_word_char(char32_t c) {
  return unicode::is_letter(c) || unicode::is_digit(c) || is_joiner_mark(c) || c == U'\u200C' ||
         c == U'\u200D';
}

void flush_token(std::u32string& word, TokenSequence& out) {
  std::size_t begin = 0;
  std::size_t end = word.size();
  while (begin < end && is_joiner_mark(word[begin])) {
    ++begin;
  }
  while (end > begin && is_joiner_mark(word[end - 1])) {
    --end;
  }
  const std::u32string_view core(word.data() + begin, end - begin);
  const bool all_digits = std::all_of(core.begin(), core.end(), [](char32_t c) {
    return unicode::is_digit(c);
  });
  if (!core.empty() && !all_digits) {
    out.push_back(unicode::to_lower(unicode::encode(core)));
  }
  word.clear();
}

}  // namespace

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::u32string word;
  for (char32_t c : unicode::decode(unicode::nfc(text))) {
    if (is_word_char(c)) {
      word.push_back(c);
    } else if (!word.empty()) {
      flush_token(word, out);
    }
  }
  if (!word.empty()) {
    flush_token(word, out);
  }
  return out;
}

TokenSequence remove_stopwords(const TokenSequence& tokens, const Stoplist& stoplist) {
  TokenSequence out;
  out.reserve(tokens.size());
  std::copy_if(tokens.begin(), tokens.end(), std::back_inserter(out),
               [&](const std::string& token) { return stoplist.find(token) == stoplist.end(); });
  return out;
}

Stoplist parse_stoplist(std::string_view text) {
  Stoplist out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
      line.remove_suffix(1);
    }
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
      line.remove_prefix(1);
    }
    if (!line.empty() && line.front() != '#') {
      out.insert(unicode::to_lower(unicode::nfc(line)));
    }
    pos = end + 1;
  }
  return out;
}

const Stoplist& default_stoplist() {
  static const Stoplist list = parse_stoplist(data::kStopwordsEn);
  return list;
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  return parse_stoplist(io::read_file(path));
}

NGramTable::NGramTable(std::size_t n) : n_(n) {
  if (n == 0) {
    throw std::invalid_argument("n-gram order must be >= 1");
  }
}

void NGramTable::add_sequence(const TokenSequence& tokens) {
  if (tokens.size() < n_) {
    return;
  }
  for (std::size_t i = 0; i + n_ <= tokens.size(); ++i) {
    NGram gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
               tokens.begin() + static_cast<std::ptrdiff_t>(i + n_));
    ++counts_[std::move(gram)];
  }
}

void NGramTable::merge(const NGramTable& other) {
  if (other.n_ != n_) {
    throw std::invalid_argument("cannot merge n-gram tables of different order");
  }
  for (const auto& [gram, count] : other.counts_) {
    counts_[gram] += count;
  }
}

std::size_t NGramTable::count(const NGram& gram) const {
  auto it = counts_.find(gram);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t NGramTable::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0},
                         [](std::size_t acc, const auto& entry) { return acc + entry.second; });
}

std::string NGramCount::joined() const {
  std::string out;
  for (const auto& token : gram) {
    if (!out.empty()) {
      out += ' ';
    }
    out += token;
  }
  return out;
}

std::vector<NGramCount> rank_ngrams(const NGramTable& table, std::size_t k) {
  std::vector<NGramCount> ranked;
  ranked.reserve(table.counts().size());
  for (const auto& [gram, count] : table.counts()) {
    ranked.push_back({gram, count});
  }
  // The map already iterates in lexicographic order, so a stable sort on
  // count alone yields the required tie order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const NGramCount& a, const NGramCount& b) { return a.count > b.count; });
  if (ranked.size() > k) {
    ranked.resize(k);
  }
  return ranked;
}

TokenSequence verse_tokens(const Verse& verse, const Stoplist& stoplist) {
  TokenSequence tokens = tokenize(verse.clean_text);
  return stoplist.empty() ? tokens : remove_stopwords(tokens, stoplist);
}

namespace {

void require_order(std::size_t n, std::size_t k) {
  if (n < 1) {
    throw std::invalid_argument("n must be >= 1");
  }
  if (k < 1) {
    throw std::invalid_argument("k must be >= 1");
  }
}

}  // namespace

std::vector<NGramCount> top_ngrams(const TranslationCorpus& corpus, std::size_t n, std::size_t k,
                                   const Stoplist& stoplist) {
  require_order(n, k);
  NGramTable table(n);
  for (const auto& [ref, verse] : corpus.verses()) {
    table.add_sequence(verse_tokens(verse, stoplist));
  }
  return rank_ngrams(table, k);
}

ConditionedNGrams sentiment_conditioned_ngrams(const TranslationCorpus& corpus,
                                               const SentimentPredictions& predictions,
                                               SentimentLabel label, std::size_t n, std::size_t k,
                                               const Stoplist& stoplist) {
  require_order(n, k);
  ConditionedNGrams out;
  NGramTable table(n);
  for (const auto& [ref, verse] : corpus.verses()) {
    const VersePrediction* prediction = predictions.find(ref);
    if (prediction == nullptr) {
      out.warnings.push_back(
          {ref, "no sentiment prediction for " + to_string(ref) + " in '" + corpus.id() + "'"});
      continue;
    }
    if (prediction->labels.contains(label)) {
      table.add_sequence(verse_tokens(verse, stoplist));
    }
  }
  out.ranked = rank_ngrams(table, k);
  return out;
}

ConditionedNGrams sentiment_conditioned_ngrams(const TranslationCorpus& corpus,
                                               const SentimentPredictions& predictions,
                                               std::string_view label, std::size_t n,
                                               std::size_t k, const Stoplist& stoplist) {
  return sentiment_conditioned_ngrams(corpus, predictions, parse_label(label), n, k, stoplist);
}

std::string ngrams_to_csv(const std::vector<NGramCount>& ranked) {
  std::string out = io::csv_row({"ngram", "count"});
  for (const auto& entry : ranked) {
    out += io::csv_row({entry.joined(), std::to_string(entry.count)});
  }
  return out;
}

}  // namespace verse_eval
