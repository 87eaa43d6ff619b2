#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "verse_eval/common.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/labels.hpp"
#include "verse_eval/providers.hpp"

namespace verse_eval {

/// {label i : p_i >= threshold}. Threshold must lie in (0, 1).
LabelSet binarize(const SentimentProbabilities& probabilities, double threshold);

/// |a ∩ b| / |a ∪ b|, with two empty sets scoring 1.0.
double jaccard(const LabelSet& a, const LabelSet& b);

struct VersePrediction {
  SentimentProbabilities probabilities;
  LabelSet labels;
};

/// Thresholded multi-label predictions for one corpus. Every stored label set
/// is the binarization of its stored probabilities.
class SentimentPredictions {
 public:
  SentimentPredictions(std::string corpus_id, double threshold);

  const std::string& corpus_id() const { return corpus_id_; }
  double threshold() const { return threshold_; }

  /// Validates range and finiteness, then stores probabilities with their
  /// binarized label set. Duplicate refs throw.
  void add(const VerseRef& ref, const SentimentProbabilities& probabilities);

  const VersePrediction* find(const VerseRef& ref) const;
  std::size_t size() const { return per_verse_.size(); }
  bool empty() const { return per_verse_.empty(); }
  std::vector<int> chapters() const;
  const std::map<VerseRef, VersePrediction>& per_verse() const { return per_verse_; }

 private:
  std::string corpus_id_;
  double threshold_;
  std::map<VerseRef, VersePrediction> per_verse_;
};

/// How verses where both label sets are empty enter a chapter mean.
enum class EmptyPairPolicy {
  agree,  // scored 1.0
  skip,   // left out of the mean
};

struct ChapterJaccard {
  int chapter = 0;
  double mean = 0.0;
  std::size_t verses = 0;  // verses that entered the mean
};

/// Mean per-verse Jaccard over refs present in both predictions for the
/// chapter. Throws Error when the chapter has no usable common verses.
ChapterJaccard chapter_jaccard(const SentimentPredictions& a, const SentimentPredictions& b,
                               int chapter, EmptyPairPolicy policy = EmptyPairPolicy::agree);

using LabelCounts = Eigen::Matrix<std::int64_t, static_cast<int>(kNumLabels), 1>;

/// Verses carrying each label, over the whole corpus or one chapter.
LabelCounts cumulative_counts(const SentimentPredictions& predictions,
                              std::optional<int> chapter = std::nullopt);

/// 10x10 verse counts: (i, j) verses carrying both i and j, (i, i) verses
/// carrying i. Symmetric with a dominant diagonal.
using CooccurrenceMatrix =
    Eigen::Matrix<std::int64_t, static_cast<int>(kNumLabels), static_cast<int>(kNumLabels)>;

CooccurrenceMatrix cooccurrence(const SentimentPredictions& predictions,
                                std::optional<int> chapter = std::nullopt);

/// Scores the clean text of every verse in batches. Any provider failure or
/// out-of-range probability aborts the whole run.
SentimentPredictions predict_corpus(const SentimentProvider& provider,
                                    const TranslationCorpus& corpus, double threshold,
                                    std::size_t batch_size = 32);

/// JSONL: header {"corpus_id", "threshold", "label_order"} then one
/// {"chapter", "verse", "probabilities", "labels"} record per verse.
std::string predictions_to_jsonl(const SentimentPredictions& predictions);
void save_predictions(const SentimentPredictions& predictions, const std::filesystem::path& path);
/// Rejects a header whose label order differs from the canonical one and any
/// record whose labels disagree with its thresholded probabilities.
SentimentPredictions load_predictions(const std::filesystem::path& path);

}  // namespace verse_eval
