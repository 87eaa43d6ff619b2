#include "verse_eval/semantic.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <unordered_map>

#include "verse_eval/io.hpp"

namespace verse_eval {

EmbeddingSet::EmbeddingSet(std::string corpus_id, std::string model_id, int dim)
    : corpus_id_(std::move(corpus_id)), model_id_(std::move(model_id)), dim_(dim) {
  if (dim < 1) {
    throw ValidationError("embedding dimension must be >= 1");
  }
}

void EmbeddingSet::add(const VerseRef& ref, EmbeddingVector vector) {
  if (vector.size() != dim_) {
    throw ValidationError("embedding for " + to_string(ref) + " has dimension " +
                          std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  if (!vector.allFinite()) {
    throw ValidationError("embedding for " + to_string(ref) + " has non-finite entries");
  }
  if (!per_verse_.emplace(ref, std::move(vector)).second) {
    throw ValidationError("duplicate embedding for " + to_string(ref));
  }
}

const EmbeddingVector* EmbeddingSet::find(const VerseRef& ref) const {
  auto it = per_verse_.find(ref);
  return it == per_verse_.end() ? nullptr : &it->second;
}

std::string pair_name(const std::pair<std::string, std::string>& pair) {
  return pair.first + "-" + pair.second;
}

SimilarityResult verse_similarities(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("embedding sets '" + a.corpus_id() + "' (dim " +
                          std::to_string(a.dim()) + ") and '" + b.corpus_id() + "' (dim " +
                          std::to_string(b.dim()) + ") differ in dimension");
  }
  SimilarityResult out;
  const std::pair<std::string, std::string> pair{a.corpus_id(), b.corpus_id()};
  auto l = a.per_verse().begin();
  auto r = b.per_verse().begin();
  const auto l_end = a.per_verse().end();
  const auto r_end = b.per_verse().end();
  auto warn = [&out](const VerseRef& ref, const std::string& has, const std::string& lacks) {
    out.warnings.push_back({ref, "embedding for " + to_string(ref) + " present in '" + has +
                                     "' but missing from '" + lacks + "'"});
  };
  while (l != l_end || r != r_end) {
    if (r == r_end || (l != l_end && l->first < r->first)) {
      warn(l->first, a.corpus_id(), b.corpus_id());
      ++l;
    } else if (l == l_end || r->first < l->first) {
      warn(r->first, b.corpus_id(), a.corpus_id());
      ++r;
    } else {
      out.records.push_back({l->first, cosine(l->second, r->second), pair});
      ++l;
      ++r;
    }
  }
  return out;
}

namespace {

// Welford accumulation of mean and population variance.
class RunningStats {
 public:
  void push(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t n() const { return n_; }
  double mean() const { return mean_; }
  double population_stddev() const {
    return n_ == 0 ? 0.0 : std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_)));
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

ChapterStats finish(int chapter, const RunningStats& stats) {
  return {chapter, stats.mean(), stats.population_stddev(), stats.n()};
}

}  // namespace

ChapterStats chapter_stats(const std::vector<SimilarityRecord>& records, int chapter) {
  RunningStats stats;
  for (const auto& record : records) {
    if (record.ref.chapter == chapter) {
      stats.push(record.score);
    }
  }
  if (stats.n() == 0) {
    throw Error("no similarity records in chapter " + std::to_string(chapter));
  }
  return finish(chapter, stats);
}

ChapterStats pooled_stats(const std::vector<SimilarityRecord>& records,
                          const std::vector<int>& chapters) {
  RunningStats stats;
  for (const auto& record : records) {
    if (std::find(chapters.begin(), chapters.end(), record.ref.chapter) != chapters.end()) {
      stats.push(record.score);
    }
  }
  if (stats.n() == 0) {
    throw Error("no similarity records in the selected chapters");
  }
  return finish(0, stats);
}

std::vector<SimilarityRecord> extremes(const std::vector<SimilarityRecord>& records, std::size_t k,
                                       Direction direction) {
  if (k < 1) {
    throw std::invalid_argument("k must be >= 1");
  }
  std::vector<SimilarityRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [direction](const SimilarityRecord& a, const SimilarityRecord& b) {
                     if (a.score != b.score) {
                       return direction == Direction::most ? a.score > b.score
                                                           : a.score < b.score;
                     }
                     return a.ref < b.ref;
                   });
  if (sorted.size() > k) {
    sorted.resize(k);
  }
  return sorted;
}

std::vector<std::size_t> mmr_select(const Eigen::VectorXd& relevance,
                                    const Eigen::MatrixXd& similarity, std::size_t k,
                                    double lambda) {
  const Eigen::Index n = relevance.size();
  if (similarity.rows() != n || similarity.cols() != n) {
    throw ValidationError("mmr_select: similarity matrix must be square and match relevance");
  }
  if (k < 1) {
    throw std::invalid_argument("k must be >= 1");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  std::vector<std::size_t> picked;
  if (n == 0) {
    return picked;
  }
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  // Highest similarity of each candidate to anything picked so far.
  Eigen::VectorXd redundancy =
      Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());

  Eigen::Index best = 0;
  relevance.maxCoeff(&best);  // first maximal index
  while (true) {
    picked.push_back(static_cast<std::size_t>(best));
    taken[static_cast<std::size_t>(best)] = true;
    if (picked.size() >= k || picked.size() >= static_cast<std::size_t>(n)) {
      break;
    }
    redundancy = redundancy.cwiseMax(similarity.col(best));
    const Eigen::VectorXd score = lambda * relevance - (1.0 - lambda) * redundancy;
    best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!taken[static_cast<std::size_t>(i)] && (best < 0 || score[i] > score[best])) {
        best = i;
      }
    }
  }
  return picked;
}

std::vector<std::string> keyword_candidates(std::string_view document, const KeywordOptions& options,
                                            const Stoplist& stoplist) {
  if (options.ngram_min < 1 || options.ngram_min > options.ngram_max) {
    throw std::invalid_argument("n-gram range must satisfy 1 <= lo <= hi");
  }
  const TokenSequence tokens = remove_stopwords(tokenize(document), stoplist);
  std::map<std::string, std::size_t> frequency;
  for (std::size_t n = options.ngram_min; n <= options.ngram_max; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string phrase = tokens[i];
      for (std::size_t j = i + 1; j < i + n; ++j) {
        phrase += ' ';
        phrase += tokens[j];
      }
      ++frequency[std::move(phrase)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(frequency.begin(), frequency.end());
  if (ranked.size() > options.max_candidates) {
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(options.max_candidates);
    std::sort(ranked.begin(), ranked.end());
  }
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& entry : ranked) {
    out.push_back(std::move(entry.first));
  }
  return out;
}

namespace {

std::vector<EmbeddingVector> embed_batched(const EmbeddingProvider& provider,
                                           const std::vector<std::string>& texts,
                                           std::size_t batch_size) {
  if (batch_size == 0) {
    throw std::invalid_argument("batch_size must be >= 1");
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (std::size_t begin = 0; begin < texts.size(); begin += batch_size) {
    const std::size_t count = std::min(batch_size, texts.size() - begin);
    std::vector<EmbeddingVector> batch =
        provider.embed(std::span<const std::string>(texts.data() + begin, count));
    if (batch.size() != count) {
      throw ProviderError("embedding provider returned " + std::to_string(batch.size()) +
                          " vectors for " + std::to_string(count) + " texts");
    }
    for (auto& v : batch) {
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

std::vector<Keyword> mmr_keywords(std::string_view document, const EmbeddingProvider& provider,
                                  const KeywordOptions& options, const Stoplist& stoplist) {
  if (options.k < 1) {
    throw std::invalid_argument("k must be >= 1");
  }
  if (!(options.lambda >= 0.0 && options.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (document.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ValidationError("cannot extract keywords from an empty document");
  }
  const std::vector<std::string> candidates = keyword_candidates(document, options, stoplist);
  if (candidates.empty()) {
    return {};
  }
  std::vector<std::string> texts;
  texts.reserve(candidates.size() + 1);
  texts.emplace_back(document);
  texts.insert(texts.end(), candidates.begin(), candidates.end());
  const std::vector<EmbeddingVector> vectors = embed_batched(provider, texts, options.batch_size);

  const auto m = static_cast<Eigen::Index>(candidates.size());
  const Eigen::Index dim = vectors.front().size();
  Eigen::VectorXd relevance(m);
  Eigen::MatrixXd unit(m, dim);
  for (Eigen::Index i = 0; i < m; ++i) {
    const EmbeddingVector& v = vectors[static_cast<std::size_t>(i) + 1];
    relevance[i] = cosine(v, vectors.front());
    unit.row(i) = v.transpose() / v.norm();
  }
  const Eigen::MatrixXd similarity = unit * unit.transpose();

  std::vector<Keyword> out;
  for (std::size_t index : mmr_select(relevance, similarity, options.k, options.lambda)) {
    out.push_back({candidates[index], relevance[static_cast<Eigen::Index>(index)]});
  }
  return out;
}

EmbeddingSet embed_corpus(const EmbeddingProvider& provider, const TranslationCorpus& corpus,
                          std::size_t batch_size) {
  std::vector<VerseRef> refs;
  std::vector<std::string> texts;
  for (const auto& [ref, verse] : corpus.verses()) {
    refs.push_back(ref);
    texts.push_back(verse.clean_text);
  }
  const std::vector<EmbeddingVector> vectors = embed_batched(provider, texts, batch_size);
  const int dim = vectors.empty() ? 1 : static_cast<int>(vectors.front().size());
  EmbeddingSet out(corpus.id(), provider.model_id(), dim);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw ValidationError("embedding dimension drifted from " + std::to_string(dim) + " to " +
                            std::to_string(vectors[i].size()) + " at " + to_string(refs[i]));
    }
    out.add(refs[i], vectors[i]);
  }
  return out;
}

std::string embeddings_to_jsonl(const EmbeddingSet& set) {
  io::OrderedJson header;
  header["corpus_id"] = set.corpus_id();
  header["model_id"] = set.model_id();
  header["dim"] = set.dim();
  std::string out = io::dump_line(header) + "\n";
  for (const auto& [ref, vector] : set.per_verse()) {
    io::OrderedJson record;
    record["chapter"] = ref.chapter;
    record["verse"] = ref.verse;
    record["vector"] = std::vector<double>(vector.data(), vector.data() + vector.size());
    out += io::dump_line(record);
    out += '\n';
  }
  return out;
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  io::write_file(path, embeddings_to_jsonl(set));
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  std::optional<EmbeddingSet> out;
  io::for_each_json_line(path, [&](const io::Json& record, std::size_t) {
    if (!out) {
      if (!record.contains("corpus_id") || !record.contains("model_id") ||
          !record.contains("dim")) {
        throw FormatError("embedding header must carry corpus_id, model_id, dim");
      }
      out.emplace(record.at("corpus_id").get<std::string>(),
                  record.at("model_id").get<std::string>(), record.at("dim").get<int>());
      return;
    }
    const VerseRef ref{record.at("chapter").get<int>(), record.at("verse").get<int>()};
    const auto values = record.at("vector").get<std::vector<double>>();
    EmbeddingVector v = Eigen::Map<const EmbeddingVector>(values.data(),
                                                          static_cast<Eigen::Index>(values.size()));
    try {
      out->add(ref, std::move(v));
    } catch (const ValidationError& e) {
      throw FormatError(e.what());
    }
  });
  if (!out) {
    throw FormatError(path.string() + ": empty embedding file");
  }
  return std::move(*out);
}

std::string similarities_to_csv(const std::vector<SimilarityRecord>& records) {
  std::string out = io::csv_row({"chapter", "verse", "score", "pair"});
  for (const auto& r : records) {
    out += io::csv_row({std::to_string(r.ref.chapter), std::to_string(r.ref.verse),
                        io::format_shortest(r.score), pair_name(r.pair)});
  }
  return out;
}

}  // namespace verse_eval
