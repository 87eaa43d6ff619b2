#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "verse_eval/corpus.hpp"
#include "verse_eval/semantic.hpp"
#include "verse_eval/sentiment.hpp"
#include "verse_eval/textstats.hpp"

namespace verse_eval {

enum class ReportFormat { csv, json, svg };

ReportFormat parse_report_format(std::string_view name);

struct CorpusPair {
  std::string a;
  std::string b;

  std::string name() const { return a + "-" + b; }
  friend bool operator==(const CorpusPair&, const CorpusPair&) = default;
};

struct ReportSpec {
  std::vector<std::string> corpus_ids;  // defaults to the members of `pairs`
  std::vector<CorpusPair> pairs;
  std::vector<int> chapters;            // empty selects every shared chapter
  std::filesystem::path output_dir;
  std::set<ReportFormat> formats{ReportFormat::csv, ReportFormat::json, ReportFormat::svg};

  /// Throws ValidationError without a pair, a format or an output directory,
  /// or on a pair that compares a corpus with itself.
  void validate() const;
  /// corpus_ids followed by any pair member not already listed.
  std::vector<std::string> all_corpus_ids() const;
};

/// A rendered table in both machine-readable forms.
struct TableArtifact {
  std::string csv;
  std::string json;
};

struct JaccardColumn {
  std::string pair;
  std::vector<ChapterJaccard> chapters;
};

/// Mean of the column's chapter values.
double jaccard_average(const JaccardColumn& column);

/// One row per chapter plus an "Average" row, values to 3 decimals. The JSON
/// numbers are the CSV numbers.
TableArtifact render_jaccard_table(const std::vector<JaccardColumn>& columns);

struct CosineColumn {
  std::string pair;
  std::vector<ChapterStats> chapters;
  /// Statistics over every verse of the selected chapters, when known.
  std::optional<ChapterStats> pooled;
};

/// "M.MM(S.SSS)".
std::string format_cosine_cell(double mean, double stddev);
/// Inverse of format_cosine_cell; throws FormatError on other shapes.
std::pair<double, double> parse_cosine_cell(std::string_view cell);

/// Average row: mean of the chapter means with the pooled standard deviation.
/// Chapters without a verse count are weighted equally when pooling.
ChapterStats cosine_average(const CosineColumn& column);

TableArtifact render_cosine_table(const std::vector<CosineColumn>& columns);

/// 10x10 grid labelled with the canonical names; shading scales linearly to
/// the largest count and every cell prints its count.
std::string render_heatmap_svg(const CooccurrenceMatrix& counts, const std::string& title);

struct Bar {
  std::string label;
  double value = 0.0;
};

/// Horizontal bars in the given order with value labels. Throws
/// std::invalid_argument when `bars` is empty.
std::string render_bars_svg(const std::vector<Bar>& bars, const std::string& title);

std::vector<Bar> ngram_bars(const std::vector<NGramCount>& ranked);
std::vector<Bar> label_bars(const LabelCounts& counts);

struct ExtremeVerse {
  std::string pair;
  SimilarityRecord record;
  std::string text_a;
  std::string text_b;
};

TableArtifact render_extremes(const std::vector<ExtremeVerse>& rows);

std::string xml_escape(std::string_view text);

struct ReportOptions {
  double threshold = 0.5;
  EmptyPairPolicy empty_pairs = EmptyPairPolicy::agree;
  Stoplist stoplist = default_stoplist();
  std::size_t ngram_k = 10;
  std::size_t extremes_k = 5;
  bool keywords = true;
  KeywordOptions keyword_options;
  std::size_t batch_size = 32;
};

struct ReportResult {
  std::vector<std::filesystem::path> artifacts;  // relative to the output dir, sorted
  Warnings warnings;
};

/// Runs sentiment, semantic and n-gram analysis for every corpus and pair of
/// the spec and writes all artifacts under spec.output_dir.
ReportResult run_report(const ReportSpec& spec, const CorpusSet& corpora,
                        const SentimentProvider& sentiment, const EmbeddingProvider& embedding,
                        const ReportOptions& options = {});

}  // namespace verse_eval
