#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "verse_eval/providers.hpp"
#include "verse_eval/report.hpp"
#include "verse_eval/semantic.hpp"
#include "verse_eval/sentiment.hpp"

namespace verse_eval {

/// Everything `report` needs, read from a config file. Flags applied by the
/// command line take precedence over it.
struct RunConfig {
  std::filesystem::path corpus_dir;
  std::vector<std::string> corpus_ids;

  ProviderConfig sentiment;
  ProviderConfig embedding;
  ProviderConfig translation;
  std::string source_lang = "sa";
  std::string target_lang = "en";
  std::optional<std::filesystem::path> translation_cache;

  double threshold = 0.5;
  EmptyPairPolicy empty_pairs = EmptyPairPolicy::agree;
  std::vector<int> chapters;
  std::vector<CorpusPair> pairs;

  std::optional<std::filesystem::path> stoplist;
  bool keep_stopwords = false;
  std::size_t ngram_k = 10;

  std::size_t extremes_k = 5;
  bool keywords = true;
  KeywordOptions keyword_options;

  std::filesystem::path output_dir;
  std::set<ReportFormat> formats{ReportFormat::csv, ReportFormat::json, ReportFormat::svg};
};

/// Reads a config file. Relative paths resolve against its directory, and
/// VERSE_EVAL_ENDPOINT replaces the endpoint of every http provider.
RunConfig load_run_config(const std::filesystem::path& path);

/// "A:B" -> {A, B}.
CorpusPair parse_pair(std::string_view text);

/// Runs one command line (args[0] is the program name). Returns 0 on success,
/// 2 on a usage error and 1 on a runtime error. Data goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace verse_eval
