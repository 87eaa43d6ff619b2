#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "verse_eval/common.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/providers.hpp"
#include "verse_eval/textstats.hpp"

namespace verse_eval {

/// (u·v) / (‖u‖‖v‖). Throws on mismatched sizes or a zero vector.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar cosine(const Eigen::MatrixBase<DerivedU>& u,
                                 const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  if (u.size() != v.size()) {
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()) + ")");
  }
  const Scalar norm_u = u.norm();
  const Scalar norm_v = v.norm();
  if (norm_u == Scalar(0) || norm_v == Scalar(0)) {
    throw ValidationError("cosine: zero vector");
  }
  return u.dot(v) / (norm_u * norm_v);
}

/// Per-verse embeddings of one corpus, all of one dimension.
class EmbeddingSet {
 public:
  EmbeddingSet(std::string corpus_id, std::string model_id, int dim);

  const std::string& corpus_id() const { return corpus_id_; }
  const std::string& model_id() const { return model_id_; }
  int dim() const { return dim_; }

  /// Throws ValidationError on a dimension mismatch, non-finite entries or a
  /// duplicate ref.
  void add(const VerseRef& ref, EmbeddingVector vector);

  const EmbeddingVector* find(const VerseRef& ref) const;
  std::size_t size() const { return per_verse_.size(); }
  const std::map<VerseRef, EmbeddingVector>& per_verse() const { return per_verse_; }

 private:
  std::string corpus_id_;
  std::string model_id_;
  int dim_;
  std::map<VerseRef, EmbeddingVector> per_verse_;
};

struct SimilarityRecord {
  VerseRef ref;
  double score = 0.0;
  std::pair<std::string, std::string> pair;
};

struct SimilarityResult {
  std::vector<SimilarityRecord> records;  // sorted by ref
  Warnings warnings;
};

/// Cosine for every ref present in both sets; unmatched refs are warned.
SimilarityResult verse_similarities(const EmbeddingSet& a, const EmbeddingSet& b);

struct ChapterStats {
  int chapter = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population (divide by n)
  std::size_t n = 0;
};

/// Throws Error when the chapter has no records.
ChapterStats chapter_stats(const std::vector<SimilarityRecord>& records, int chapter);

/// Statistics over every record of the listed chapters taken as one sample.
ChapterStats pooled_stats(const std::vector<SimilarityRecord>& records,
                          const std::vector<int>& chapters);

enum class Direction { most, least };

/// k highest (most) or lowest (least) scores, ties broken by ref order.
std::vector<SimilarityRecord> extremes(const std::vector<SimilarityRecord>& records, std::size_t k,
                                       Direction direction);

struct Keyword {
  std::string phrase;
  double relevance = 0.0;
};

struct KeywordOptions {
  std::size_t ngram_min = 1;
  std::size_t ngram_max = 3;
  std::size_t k = 10;
  double lambda = 0.5;
  std::size_t max_candidates = 2000;
  std::size_t batch_size = 64;
};

/// Greedy maximal-marginal-relevance selection. `relevance[i]` is candidate
/// i's similarity to the document and `similarity(i, j)` the pairwise
/// candidate similarity. The first pick is the relevance argmax; each later
/// pick maximizes lambda*rel - (1-lambda)*max similarity to the picks so far.
/// Ties go to the lower index. Returns candidate indices in pick order.
std::vector<std::size_t> mmr_select(const Eigen::VectorXd& relevance,
                                    const Eigen::MatrixXd& similarity, std::size_t k,
                                    double lambda);

/// Distinct stopword-filtered n-grams of the document, capped at
/// `max_candidates` by in-document frequency, in lexicographic order.
std::vector<std::string> keyword_candidates(std::string_view document, const KeywordOptions& options,
                                            const Stoplist& stoplist);

/// Keyword extraction by embedding similarity with MMR diversification.
std::vector<Keyword> mmr_keywords(std::string_view document, const EmbeddingProvider& provider,
                                  const KeywordOptions& options, const Stoplist& stoplist);

/// Embeds the clean text of every verse in batches.
EmbeddingSet embed_corpus(const EmbeddingProvider& provider, const TranslationCorpus& corpus,
                          std::size_t batch_size = 32);

/// JSONL: header {"corpus_id", "model_id", "dim"} then
/// {"chapter", "verse", "vector"} per verse.
std::string embeddings_to_jsonl(const EmbeddingSet& set);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet load_embeddings(const std::filesystem::path& path);

/// CSV with columns `chapter,verse,score,pair`.
std::string similarities_to_csv(const std::vector<SimilarityRecord>& records);

std::string pair_name(const std::pair<std::string, std::string>& pair);

}  // namespace verse_eval
