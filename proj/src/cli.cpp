#include "verse_eval/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>

#include "verse_eval/acquire.hpp"
#include "verse_eval/config.hpp"
#include "verse_eval/corpus.hpp"
#include "verse_eval/io.hpp"
#include "verse_eval/textstats.hpp"

namespace verse_eval {
namespace {

constexpr const char* kEndpointEnv = "VERSE_EVAL_ENDPOINT";
constexpr const char* kCacheEnv = "VERSE_EVAL_CACHE";

// Bad flag values detected after parsing; reported like a parse error.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::optional<std::string> env(const char* name) {
  const char* value = std::getenv(name);
  if (value == nullptr || *value == '\0') {
    return std::nullopt;
  }
  return std::string(value);
}

void apply_endpoint_env(ProviderConfig& config) {
  if (config.kind == ProviderKind::http) {
    if (auto endpoint = env(kEndpointEnv)) {
      config.endpoint = *endpoint;
    }
  }
}

ProviderConfig provider_section(const ConfigFile& file, const std::string& section) {
  ProviderConfig config;
  if (auto kind = file.get_string(section, "provider")) {
    config.kind = parse_provider_kind(*kind);
  }
  if (auto endpoint = file.get_string(section, "endpoint")) {
    config.endpoint = *endpoint;
  }
  if (auto path = file.get_path(section, "file")) {
    config.file_path = *path;
  }
  if (auto n = file.get_integer(section, "batch_size")) {
    if (*n < 1) throw ValidationError("[" + section + "] batch_size must be >= 1");
    config.batch_size = static_cast<std::size_t>(*n);
  }
  if (auto t = file.get_number(section, "timeout")) {
    config.timeout = std::chrono::duration<double>(*t);
  }
  if (auto n = file.get_integer(section, "max_retries")) {
    config.max_retries = static_cast<int>(*n);
  }
  if (auto n = file.get_integer(section, "max_in_flight")) {
    if (*n < 1) throw ValidationError("[" + section + "] max_in_flight must be >= 1");
    config.max_in_flight = static_cast<std::size_t>(*n);
  }
  return config;
}

std::size_t positive(std::optional<std::int64_t> value, std::size_t fallback, const char* what) {
  if (!value) {
    return fallback;
  }
  if (*value < 1) {
    throw ValidationError(std::string(what) + " must be >= 1");
  }
  return static_cast<std::size_t>(*value);
}

EmptyPairPolicy parse_empty_pairs(std::string_view name) {
  if (name == "agree") return EmptyPairPolicy::agree;
  if (name == "skip") return EmptyPairPolicy::skip;
  throw ValidationError("empty_pairs must be 'agree' or 'skip'");
}

}  // namespace

CorpusPair parse_pair(std::string_view text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos || text.find(':', colon + 1) != std::string_view::npos) {
    throw ValidationError("pair must look like A:B, got '" + std::string(text) + "'");
  }
  CorpusPair pair{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
  if (!is_valid_corpus_id(pair.a) || !is_valid_corpus_id(pair.b)) {
    throw ValidationError("invalid corpus id in pair '" + std::string(text) + "'");
  }
  return pair;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  const std::set<std::string> provider_keys{"provider",    "endpoint", "file",         "batch_size",
                                            "timeout",     "max_retries", "max_in_flight"};
  auto with = [](std::set<std::string> base, std::initializer_list<std::string> extra) {
    base.insert(extra);
    return base;
  };
  file.require_known({
      {"corpus", {"dir", "ids"}},
      {"sentiment", with(provider_keys, {"threshold", "empty_pairs"})},
      {"embedding", provider_keys},
      {"translation", with(provider_keys, {"source_lang", "target_lang", "cache"})},
      {"textstats", {"stoplist", "keep_stopwords", "top_k"}},
      {"semantic",
       {"extremes_k", "keywords", "keywords_k", "lambda", "ngram_min", "ngram_max",
        "max_candidates"}},
      {"report", {"output", "pairs", "chapters", "formats"}},
  });

  RunConfig config;
  const auto dir = file.get_path("corpus", "dir");
  if (!dir) {
    throw FormatError(path.string() + ": [corpus] dir is required");
  }
  config.corpus_dir = *dir;
  config.corpus_ids = file.get_strings("corpus", "ids").value_or(std::vector<std::string>{});

  config.sentiment = provider_section(file, "sentiment");
  config.embedding = provider_section(file, "embedding");
  config.translation = provider_section(file, "translation");
  for (ProviderConfig* provider : {&config.sentiment, &config.embedding, &config.translation}) {
    apply_endpoint_env(*provider);
  }
  config.source_lang = file.get_string("translation", "source_lang").value_or("sa");
  config.target_lang = file.get_string("translation", "target_lang").value_or("en");
  config.translation_cache = file.get_path("translation", "cache");

  config.threshold = file.get_number("sentiment", "threshold").value_or(0.5);
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw ValidationError("[sentiment] threshold must lie in (0, 1)");
  }
  if (auto policy = file.get_string("sentiment", "empty_pairs")) {
    config.empty_pairs = parse_empty_pairs(*policy);
  }

  config.stoplist = file.get_path("textstats", "stoplist");
  config.keep_stopwords = file.get_bool("textstats", "keep_stopwords").value_or(false);
  config.ngram_k = positive(file.get_integer("textstats", "top_k"), 10, "[textstats] top_k");

  config.extremes_k =
      positive(file.get_integer("semantic", "extremes_k"), 5, "[semantic] extremes_k");
  config.keywords = file.get_bool("semantic", "keywords").value_or(true);
  KeywordOptions& kw = config.keyword_options;
  kw.k = positive(file.get_integer("semantic", "keywords_k"), kw.k, "[semantic] keywords_k");
  kw.lambda = file.get_number("semantic", "lambda").value_or(kw.lambda);
  kw.ngram_min =
      positive(file.get_integer("semantic", "ngram_min"), kw.ngram_min, "[semantic] ngram_min");
  kw.ngram_max =
      positive(file.get_integer("semantic", "ngram_max"), kw.ngram_max, "[semantic] ngram_max");
  kw.max_candidates = positive(file.get_integer("semantic", "max_candidates"), kw.max_candidates,
                               "[semantic] max_candidates");

  config.output_dir = file.get_path("report", "output").value_or(path.parent_path() / "report");
  for (const auto& pair : file.get_strings("report", "pairs").value_or(std::vector<std::string>{})) {
    config.pairs.push_back(parse_pair(pair));
  }
  if (auto chapters = file.get_string("report", "chapters")) {
    if (*chapters != "all") {
      config.chapters = parse_chapter_selection(*chapters);
    }
  }
  if (auto formats = file.get_strings("report", "formats")) {
    config.formats.clear();
    for (const auto& name : *formats) {
      config.formats.insert(parse_report_format(name));
    }
  }
  return config;
}

namespace {

struct ProviderFlags {
  std::string kind = "mock";
  std::string file;
  std::string endpoint;
  std::size_t batch_size = 32;
  double timeout = 30.0;
  int max_retries = 2;

  void attach(CLI::App* app, const std::string& file_help) {
    app->add_option("--provider", kind, "Provider kind")
        ->check(CLI::IsMember({"mock", "file", "http"}))
        ->capture_default_str();
    app->add_option("--file", file, file_help);
    app->add_option("--endpoint", endpoint,
                    std::string("Service URL for the http provider (default $") + kEndpointEnv +
                        ")");
    app->add_option("--batch-size", batch_size, "Texts per provider request")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--timeout", timeout, "Request timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--max-retries", max_retries, "Retries after a failed request")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }

  ProviderConfig config() const {
    ProviderConfig out;
    out.kind = parse_provider_kind(kind);
    out.file_path = file;
    out.endpoint = endpoint;
    if (out.kind == ProviderKind::http && out.endpoint.empty()) {
      out.endpoint = env(kEndpointEnv).value_or("");
    }
    out.batch_size = batch_size;
    out.timeout = std::chrono::duration<double>(timeout);
    out.max_retries = max_retries;
    try {
      out.validate();
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
    return out;
  }
};

void print_warnings(const Warnings& warnings, std::ostream& err) {
  for (const auto& warning : warnings) {
    err << "warning: ";
    if (warning.ref) {
      err << to_string(*warning.ref) << ": ";
    }
    err << warning.message << '\n';
  }
}

std::vector<int> chapters_or_all(const std::string& selection) {
  if (selection.empty() || selection == "all") {
    return {};
  }
  try {
    return parse_chapter_selection(selection);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_file(path, content);
  }
}

Stoplist choose_stoplist(const std::string& path, bool keep) {
  if (keep) {
    return {};
  }
  return path.empty() ? default_stoplist() : load_stoplist(path);
}

std::vector<int> common_chapters(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// --- ingest ------------------------------------------------------------------

struct IngestArgs {
  std::string input;
  std::string id;
  std::string title;
  std::string translator;
  std::string language = "en";
  std::string source;
  std::string output;
};

int run_ingest(const IngestArgs& args, std::ostream& out, std::ostream&) {
  if (!is_valid_corpus_id(args.id)) {
    throw UsageError("invalid corpus id '" + args.id + "'");
  }
  TranslationCorpus corpus(args.id, args.title.empty() ? args.id : args.title, args.translator,
                           args.language, args.source);
  io::for_each_json_line(args.input, [&](const io::Json& record, std::size_t) {
    std::optional<std::string> original;
    if (record.contains("original")) {
      original = record.at("original").get<std::string>();
    }
    corpus.add(make_verse({record.at("chapter").get<int>(), record.at("verse").get<int>()},
                          record.at("text").get<std::string>(), std::move(original)));
  });
  if (corpus.empty()) {
    throw ValidationError(args.input + ": no verses");
  }
  const std::filesystem::path target = std::filesystem::path(args.output) / args.id;
  save_corpus(corpus, target);
  out << "ingested " << args.id << ": " << corpus.size() << " verses in "
      << corpus.chapters().size() << " chapters -> " << target.string() << '\n';
  return 0;
}

// --- translate -----------------------------------------------------------------

struct TranslateArgs {
  std::string source;
  std::string id;
  std::string output;
  ProviderFlags provider;
  std::string source_lang = "sa";
  std::string target_lang = "en";
  std::string cache;
  double rate_limit = 5.0;
  std::size_t parallelism = 4;
};

int run_translate(const TranslateArgs& args, std::ostream& out, std::ostream& err) {
  if (!is_valid_corpus_id(args.id)) {
    throw UsageError("invalid corpus id '" + args.id + "'");
  }
  const TranslationCorpus source = load_corpus(args.source);
  ProviderConfig config = args.provider.config();
  auto provider = make_translation_provider(config, args.source_lang, args.target_lang);
  const std::filesystem::path target = std::filesystem::path(args.output) / args.id;
  std::filesystem::path cache_path = args.cache;
  if (cache_path.empty()) {
    cache_path = env(kCacheEnv).value_or((target / "translation_cache.jsonl").string());
  }
  TranslationCache cache(cache_path);
  TranslateOptions options;
  options.batch_size = config.batch_size;
  options.requests_per_second = args.rate_limit;
  options.parallelism = args.parallelism;
  options.retry.max_attempts = 1 + config.max_retries;
  ParallelCorpus result =
      build_parallel_corpus(source, *provider, args.id, args.target_lang, &cache, options);
  print_warnings(result.warnings, err);
  if (result.corpus.empty()) {
    throw ProviderError("every verse failed to translate");
  }
  save_corpus(result.corpus, target);
  std::size_t hits = 0;
  for (const auto& record : result.records) {
    hits += record.from_cache ? 1 : 0;
  }
  out << "translated " << result.corpus.size() << " of " << source.size() << " verses ("
      << hits << " from cache) -> " << target.string() << '\n';
  return 0;
}

// --- ngrams --------------------------------------------------------------------

struct NgramArgs {
  std::string corpus;
  std::size_t n = 2;
  std::size_t k = 10;
  std::string stoplist;
  bool keep_stopwords = false;
  std::string label;
  std::string preds;
  std::string output;
  std::string svg;
};

int run_ngrams(const NgramArgs& args, std::ostream& out, std::ostream& err) {
  if (!args.label.empty() && args.preds.empty()) {
    throw UsageError("--label requires --preds");
  }
  const TranslationCorpus corpus = load_corpus(args.corpus);
  const Stoplist stoplist = choose_stoplist(args.stoplist, args.keep_stopwords);
  std::vector<NGramCount> ranked;
  std::string title = corpus.id() + ": top " + std::to_string(args.n) + "-grams";
  if (args.label.empty()) {
    ranked = top_ngrams(corpus, args.n, args.k, stoplist);
  } else {
    const SentimentPredictions predictions = load_predictions(args.preds);
    ConditionedNGrams conditioned;
    try {
      conditioned = sentiment_conditioned_ngrams(corpus, predictions, args.label, args.n, args.k,
                                                 stoplist);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    print_warnings(conditioned.warnings, err);
    ranked = std::move(conditioned.ranked);
    title += " (" + args.label + ")";
  }
  emit(args.output, ngrams_to_csv(ranked), out);
  if (!args.svg.empty()) {
    if (ranked.empty()) {
      err << "warning: no n-grams to chart\n";
    } else {
      io::write_file(args.svg, render_bars_svg(ngram_bars(ranked), title));
    }
  }
  return 0;
}

// --- sentiment -----------------------------------------------------------------

struct PredictArgs {
  std::string corpus;
  ProviderFlags provider;
  double threshold = 0.5;
  std::string output;
};

int run_predict(const PredictArgs& args, std::ostream& out, std::ostream&) {
  const TranslationCorpus corpus = load_corpus(args.corpus);
  const ProviderConfig config = args.provider.config();
  auto provider = make_sentiment_provider(config);
  const SentimentPredictions predictions =
      predict_corpus(*provider, corpus, args.threshold, config.batch_size);
  emit(args.output, predictions_to_jsonl(predictions), out);
  return 0;
}

struct SummaryArgs {
  std::string preds;
  int chapter = 0;
  std::string heatmap;
  std::string bars;
};

int run_summary(const SummaryArgs& args, std::ostream& out, std::ostream&) {
  const SentimentPredictions predictions = load_predictions(args.preds);
  std::optional<int> chapter;
  if (args.chapter > 0) {
    chapter = args.chapter;
  }
  const LabelCounts counts = cumulative_counts(predictions, chapter);
  std::string csv = io::csv_row({"label", "count"});
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    csv += io::csv_row({std::string(kLabelNames[i]),
                        std::to_string(counts[static_cast<Eigen::Index>(i)])});
  }
  out << csv;
  std::string scope = predictions.corpus_id();
  if (chapter) {
    scope += " chapter " + std::to_string(*chapter);
  }
  if (!args.heatmap.empty()) {
    io::write_file(args.heatmap, render_heatmap_svg(cooccurrence(predictions, chapter),
                                                    scope + ": sentiment co-occurrence"));
  }
  if (!args.bars.empty()) {
    io::write_file(args.bars, render_bars_svg(label_bars(counts), scope + ": cumulative sentiments"));
  }
  return 0;
}

// --- jaccard -------------------------------------------------------------------

struct JaccardArgs {
  std::string a;
  std::string b;
  std::string preds_dir;
  std::string chapters;
  bool skip_empty = false;
  std::string output_dir;
};

int run_jaccard(const JaccardArgs& args, std::ostream& out, std::ostream& err) {
  const auto dir = std::filesystem::path(args.preds_dir);
  const SentimentPredictions a = load_predictions(dir / (args.a + ".jsonl"));
  const SentimentPredictions b = load_predictions(dir / (args.b + ".jsonl"));
  std::vector<int> chapters = chapters_or_all(args.chapters);
  if (chapters.empty()) {
    chapters = common_chapters(a.chapters(), b.chapters());
  }
  const CorpusPair pair{args.a, args.b};
  JaccardColumn column{pair.name(), {}};
  const EmptyPairPolicy policy = args.skip_empty ? EmptyPairPolicy::skip : EmptyPairPolicy::agree;
  for (int chapter : chapters) {
    try {
      column.chapters.push_back(chapter_jaccard(a, b, chapter, policy));
    } catch (const Error& e) {
      err << "warning: " << e.what() << '\n';
    }
  }
  if (column.chapters.empty()) {
    throw Error("no chapter of '" + pair.name() + "' could be scored");
  }
  const TableArtifact table = render_jaccard_table({column});
  out << table.csv;
  if (!args.output_dir.empty()) {
    io::write_file(std::filesystem::path(args.output_dir) / "jaccard.csv", table.csv);
    io::write_file(std::filesystem::path(args.output_dir) / "jaccard.json", table.json);
  }
  return 0;
}

// --- embed / semantic ----------------------------------------------------------

struct EmbedArgs {
  std::string corpus;
  ProviderFlags provider;
  std::string output;
};

int run_embed(const EmbedArgs& args, std::ostream& out, std::ostream&) {
  const TranslationCorpus corpus = load_corpus(args.corpus);
  const ProviderConfig config = args.provider.config();
  auto provider = make_embedding_provider(config);
  emit(args.output, embeddings_to_jsonl(embed_corpus(*provider, corpus, config.batch_size)), out);
  return 0;
}

struct SemanticArgs {
  std::string a;
  std::string b;
  std::string embeddings_dir;
  std::string chapters;
  std::size_t k = 5;
  std::string output_dir;
};

int run_semantic(const SemanticArgs& args, std::ostream& out, std::ostream& err) {
  const auto dir = std::filesystem::path(args.embeddings_dir);
  const EmbeddingSet a = load_embeddings(dir / (args.a + ".jsonl"));
  const EmbeddingSet b = load_embeddings(dir / (args.b + ".jsonl"));
  SimilarityResult result = verse_similarities(a, b);
  print_warnings(result.warnings, err);
  std::vector<int> chapters = chapters_or_all(args.chapters);
  if (chapters.empty()) {
    std::set<int> seen;
    for (const auto& record : result.records) {
      seen.insert(record.ref.chapter);
    }
    chapters.assign(seen.begin(), seen.end());
  }
  const CorpusPair pair{args.a, args.b};
  CosineColumn column{pair.name(), {}, std::nullopt};
  std::vector<int> scored;
  std::vector<SimilarityRecord> selected;
  for (int chapter : chapters) {
    try {
      column.chapters.push_back(chapter_stats(result.records, chapter));
      scored.push_back(chapter);
    } catch (const Error& e) {
      err << "warning: " << e.what() << '\n';
    }
  }
  if (scored.empty()) {
    throw Error("no chapter of '" + pair.name() + "' could be scored");
  }
  column.pooled = pooled_stats(result.records, scored);
  for (const auto& record : result.records) {
    if (std::binary_search(scored.begin(), scored.end(), record.ref.chapter)) {
      selected.push_back(record);
    }
  }
  const TableArtifact table = render_cosine_table({column});
  out << table.csv;
  if (!args.output_dir.empty()) {
    const std::filesystem::path target(args.output_dir);
    io::write_file(target / "cosine.csv", table.csv);
    io::write_file(target / "cosine.json", table.json);
    io::write_file(target / "similarities.csv", similarities_to_csv(selected));
    for (auto [direction, stem] : {std::pair{Direction::most, "extremes_most"},
                                   std::pair{Direction::least, "extremes_least"}}) {
      std::vector<ExtremeVerse> rows;
      for (const auto& record : extremes(selected, args.k, direction)) {
        rows.push_back({pair.name(), record, {}, {}});
      }
      const TableArtifact artifact = render_extremes(rows);
      io::write_file(target / (std::string(stem) + ".csv"), artifact.csv);
      io::write_file(target / (std::string(stem) + ".json"), artifact.json);
    }
  }
  return 0;
}

// --- keywords ------------------------------------------------------------------

struct KeywordArgs {
  std::string corpus;
  std::string text;
  int chapter = 0;
  ProviderFlags provider;
  KeywordOptions options;
  std::string stoplist;
  std::string output;
};

int run_keywords(const KeywordArgs& args, std::ostream& out, std::ostream&) {
  if (args.corpus.empty() == args.text.empty()) {
    throw UsageError("give exactly one of --corpus and --text");
  }
  if (args.options.ngram_min > args.options.ngram_max) {
    throw UsageError("--ngram-min must not exceed --ngram-max");
  }
  std::string document = args.text;
  if (!args.corpus.empty()) {
    const TranslationCorpus corpus = load_corpus(args.corpus);
    for (const auto& [ref, verse] : corpus.verses()) {
      if (args.chapter == 0 || ref.chapter == args.chapter) {
        document += verse.clean_text;
        document += '\n';
      }
    }
  }
  const ProviderConfig config = args.provider.config();
  auto provider = make_embedding_provider(config);
  KeywordOptions options = args.options;
  options.batch_size = config.batch_size;
  const auto keywords =
      mmr_keywords(document, *provider, options, choose_stoplist(args.stoplist, false));
  std::string csv = io::csv_row({"rank", "phrase", "relevance"});
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    csv += io::csv_row({std::to_string(i + 1), keywords[i].phrase,
                        io::format_fixed(keywords[i].relevance, 6)});
  }
  emit(args.output, csv, out);
  return 0;
}

// --- report --------------------------------------------------------------------

struct ReportArgs {
  std::string config;
  std::string output;
  std::string chapters;
  double threshold = 0.0;
  std::string endpoint;
};

int run_report_command(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig config = load_run_config(args.config);
  if (!args.output.empty()) {
    config.output_dir = args.output;
  }
  if (!args.chapters.empty()) {
    config.chapters = chapters_or_all(args.chapters);
  }
  if (args.threshold > 0.0) {
    config.threshold = args.threshold;
  }
  if (!args.endpoint.empty()) {
    for (ProviderConfig* provider : {&config.sentiment, &config.embedding}) {
      if (provider->kind == ProviderKind::http) {
        provider->endpoint = args.endpoint;
      }
    }
  }
  if (config.pairs.empty()) {
    throw UsageError(args.config + ": [report] pairs is empty");
  }

  ReportSpec spec;
  spec.corpus_ids = config.corpus_ids;
  spec.pairs = config.pairs;
  spec.chapters = config.chapters;
  spec.output_dir = config.output_dir;
  spec.formats = config.formats;

  CorpusSet corpora;
  for (const auto& id : spec.all_corpus_ids()) {
    corpora.add(load_corpus(config.corpus_dir / id));
  }
  auto sentiment = make_sentiment_provider(config.sentiment);
  auto embedding = make_embedding_provider(config.embedding);

  ReportOptions options;
  options.threshold = config.threshold;
  options.empty_pairs = config.empty_pairs;
  options.stoplist = config.keep_stopwords
                         ? Stoplist{}
                         : (config.stoplist ? load_stoplist(*config.stoplist) : default_stoplist());
  options.ngram_k = config.ngram_k;
  options.extremes_k = config.extremes_k;
  options.keywords = config.keywords;
  options.keyword_options = config.keyword_options;
  options.batch_size = config.embedding.batch_size;

  const ReportResult result = run_report(spec, corpora, *sentiment, *embedding, options);
  print_warnings(result.warnings, err);
  for (const auto& artifact : result.artifacts) {
    out << (config.output_dir / artifact).generic_string() << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translation-quality evaluation over verse-aligned parallel corpora",
               args.empty() ? "verse-eval" : args.front()};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::function<int()> action;

  IngestArgs ingest;
  {
    auto* sub = app.add_subcommand("ingest", "Validate a verses JSONL file and store it as a corpus");
    sub->add_option("--input", ingest.input, "JSONL of {chapter, verse, text[, original]}")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--id", ingest.id, "Corpus id")->required();
    sub->add_option("--output", ingest.output, "Corpora root; the corpus goes to <output>/<id>")
        ->required();
    sub->add_option("--title", ingest.title, "Title (default: the id)");
    sub->add_option("--translator", ingest.translator, "Translator");
    sub->add_option("--language", ingest.language, "Language tag")->capture_default_str();
    sub->add_option("--source", ingest.source, "Provenance note");
    sub->callback([&] { action = [&] { return run_ingest(ingest, out, err); }; });
  }

  TranslateArgs translate;
  {
    auto* sub = app.add_subcommand("translate", "Machine-translate a source corpus");
    sub->add_option("--source", translate.source, "Source corpus directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    sub->add_option("--id", translate.id, "Id of the translated corpus")->required();
    sub->add_option("--output", translate.output, "Corpora root")->required();
    translate.provider.batch_size = 25;
    translate.provider.attach(sub, "Replay fixture JSONL of {source, translation}");
    sub->add_option("--source-lang", translate.source_lang, "Source language")
        ->capture_default_str();
    sub->add_option("--target-lang", translate.target_lang, "Target language")
        ->capture_default_str();
    sub->add_option("--cache", translate.cache,
                    std::string("Translation cache JSONL (default $") + kCacheEnv +
                        ", else beside the output corpus)");
    sub->add_option("--rate-limit", translate.rate_limit, "Requests per second (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--parallelism", translate.parallelism, "Requests in flight")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->callback([&] { action = [&] { return run_translate(translate, out, err); }; });
  }

  NgramArgs ngrams;
  {
    auto* sub = app.add_subcommand("ngrams", "Top n-grams of a corpus");
    sub->add_option("--corpus", ngrams.corpus, "Corpus directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    sub->add_option("--n", ngrams.n, "n-gram length")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--k", ngrams.k, "Entries to keep")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--stoplist", ngrams.stoplist, "Stoplist file (default: bundled English list)");
    sub->add_flag("--keep-stopwords", ngrams.keep_stopwords, "Do not filter stopwords");
    sub->add_option("--label", ngrams.label, "Only verses predicted with this sentiment label");
    sub->add_option("--preds", ngrams.preds, "Predictions JSONL for --label");
    sub->add_option("--output", ngrams.output, "CSV output file (default: stdout)");
    sub->add_option("--svg", ngrams.svg, "Also write a bar chart");
    sub->callback([&] { action = [&] { return run_ngrams(ngrams, out, err); }; });
  }

  PredictArgs predict;
  SummaryArgs summary;
  {
    auto* group = app.add_subcommand("sentiment", "Multi-label sentiment predictions");
    group->require_subcommand(1);
    auto* sub = group->add_subcommand("predict", "Predict sentiment probabilities per verse");
    sub->add_option("--corpus", predict.corpus, "Corpus directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    predict.provider.attach(sub, "Sentiment store JSONL");
    sub->add_option("--threshold", predict.threshold, "Binarization threshold in (0,1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--output", predict.output, "Predictions JSONL (default: stdout)");
    sub->callback([&] { action = [&] { return run_predict(predict, out, err); }; });

    auto* sum = group->add_subcommand("summary", "Cumulative label counts of a predictions file");
    sum->add_option("--preds", summary.preds, "Predictions JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    sum->add_option("--chapter", summary.chapter, "Restrict to one chapter")
        ->check(CLI::PositiveNumber);
    sum->add_option("--heatmap", summary.heatmap, "Write the co-occurrence heatmap SVG");
    sum->add_option("--bars", summary.bars, "Write the cumulative counts bar chart SVG");
    sum->callback([&] { action = [&] { return run_summary(summary, out, err); }; });
  }

  JaccardArgs jaccard;
  {
    auto* sub = app.add_subcommand("jaccard", "Per-chapter Jaccard agreement of two predictions");
    sub->add_option("--a", jaccard.a, "First corpus id")->required();
    sub->add_option("--b", jaccard.b, "Second corpus id")->required();
    sub->add_option("--preds-dir", jaccard.preds_dir, "Directory holding <id>.jsonl predictions")
        ->required()
        ->check(CLI::ExistingDirectory);
    sub->add_option("--chapters", jaccard.chapters, "Chapter selection, e.g. 3,5,7-12 (default: all)");
    sub->add_flag("--skip-empty", jaccard.skip_empty,
                  "Leave out verses where both label sets are empty");
    sub->add_option("--output-dir", jaccard.output_dir, "Also write jaccard.{csv,json} here");
    sub->callback([&] { action = [&] { return run_jaccard(jaccard, out, err); }; });
  }

  EmbedArgs embed;
  {
    auto* sub = app.add_subcommand("embed", "Embed every verse of a corpus");
    sub->add_option("--corpus", embed.corpus, "Corpus directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    embed.provider.attach(sub, "Embedding store JSONL");
    sub->add_option("--output", embed.output, "Embeddings JSONL (default: stdout)");
    sub->callback([&] { action = [&] { return run_embed(embed, out, err); }; });
  }

  SemanticArgs semantic;
  {
    auto* sub = app.add_subcommand("semantic", "Per-chapter cosine similarity of two embedding sets");
    sub->add_option("--a", semantic.a, "First corpus id")->required();
    sub->add_option("--b", semantic.b, "Second corpus id")->required();
    sub->add_option("--embeddings-dir", semantic.embeddings_dir,
                    "Directory holding <id>.jsonl embeddings")
        ->required()
        ->check(CLI::ExistingDirectory);
    sub->add_option("--chapters", semantic.chapters, "Chapter selection (default: all)");
    sub->add_option("--k", semantic.k, "Extreme verses to list")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--output-dir", semantic.output_dir,
                    "Write cosine, similarities and extremes tables here");
    sub->callback([&] { action = [&] { return run_semantic(semantic, out, err); }; });
  }

  KeywordArgs keywords;
  {
    auto* sub = app.add_subcommand("keywords", "Keyword extraction with maximal marginal relevance");
    sub->add_option("--corpus", keywords.corpus, "Corpus directory");
    sub->add_option("--text", keywords.text, "Document text");
    sub->add_option("--chapter", keywords.chapter, "Restrict the corpus to one chapter")
        ->check(CLI::PositiveNumber);
    keywords.provider.attach(sub, "Embedding store JSONL");
    sub->add_option("--k", keywords.options.k, "Keywords to select")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--lambda", keywords.options.lambda, "Relevance weight in [0,1]")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--ngram-min", keywords.options.ngram_min, "Shortest phrase")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--ngram-max", keywords.options.ngram_max, "Longest phrase")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-candidates", keywords.options.max_candidates, "Candidate cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--stoplist", keywords.stoplist, "Stoplist file");
    sub->add_option("--output", keywords.output, "CSV output (default: stdout)");
    sub->callback([&] { action = [&] { return run_keywords(keywords, out, err); }; });
  }

  ReportArgs report;
  {
    auto* sub = app.add_subcommand("report", "Run the full evaluation from a config file");
    sub->add_option("--config", report.config, "Config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--output", report.output, "Output directory (overrides [report] output)");
    sub->add_option("--chapters", report.chapters, "Chapter selection (overrides the config)");
    sub->add_option("--threshold", report.threshold, "Binarization threshold in (0,1)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--endpoint", report.endpoint,
                    std::string("Inference service URL for http providers (overrides $") +
                        kEndpointEnv + ")");
    sub->callback([&] { action = [&] { return run_report_command(report, out, err); }; });
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) {
    argv.push_back("verse-eval");
  }
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    return action ? action() : 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace verse_eval
