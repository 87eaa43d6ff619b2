#include "verse_eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "verse_eval/io.hpp"
#include "verse_eval/unicode.hpp"

namespace verse_eval {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  if (name == "svg") return ReportFormat::svg;
  throw ValidationError("unknown report format '" + std::string(name) +
                        "' (expected csv, json or svg)");
}

void ReportSpec::validate() const {
  if (pairs.empty()) {
    throw ValidationError("report needs at least one corpus pair");
  }
  if (formats.empty()) {
    throw ValidationError("report needs at least one output format");
  }
  if (output_dir.empty()) {
    throw ValidationError("report needs an output directory");
  }
  for (const auto& pair : pairs) {
    if (pair.a == pair.b) {
      throw ValidationError("pair compares '" + pair.a + "' with itself");
    }
    if (!is_valid_corpus_id(pair.a) || !is_valid_corpus_id(pair.b)) {
      throw ValidationError("invalid corpus id in pair '" + pair.name() + "'");
    }
  }
  for (const auto& id : all_corpus_ids()) {
    for (const auto& pair : pairs) {
      if (pair.name() == id) {
        throw ValidationError("pair '" + pair.name() + "' collides with corpus id '" + id + "'");
      }
    }
  }
  for (int chapter : chapters) {
    if (chapter < 1) {
      throw ValidationError("chapters must be >= 1");
    }
  }
}

std::vector<std::string> ReportSpec::all_corpus_ids() const {
  std::vector<std::string> ids = corpus_ids;
  auto add = [&](const std::string& id) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      ids.push_back(id);
    }
  };
  for (const auto& pair : pairs) {
    add(pair.a);
    add(pair.b);
  }
  return ids;
}

// --- tables --------------------------------------------------------------------

namespace {

// The value a table prints, so JSON and CSV carry the same number.
double printed(double value, int decimals) {
  const std::string text = io::format_fixed(value, decimals);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

std::vector<int> table_chapters(const auto& columns) {
  std::set<int> chapters;
  for (const auto& column : columns) {
    for (const auto& entry : column.chapters) {
      chapters.insert(entry.chapter);
    }
  }
  return {chapters.begin(), chapters.end()};
}

template <typename Entry>
const Entry* chapter_entry(const std::vector<Entry>& entries, int chapter) {
  for (const auto& entry : entries) {
    if (entry.chapter == chapter) {
      return &entry;
    }
  }
  return nullptr;
}

std::vector<std::string> header_row(const auto& columns) {
  std::vector<std::string> header{"chapter"};
  for (const auto& column : columns) {
    header.push_back(column.pair);
  }
  return header;
}

}  // namespace

double jaccard_average(const JaccardColumn& column) {
  if (column.chapters.empty()) {
    throw Error("no chapters in Jaccard column '" + column.pair + "'");
  }
  double sum = 0.0;
  for (const auto& entry : column.chapters) {
    sum += entry.mean;
  }
  return sum / static_cast<double>(column.chapters.size());
}

TableArtifact render_jaccard_table(const std::vector<JaccardColumn>& columns) {
  std::string csv = io::csv_row(header_row(columns));
  io::OrderedJson json;
  json["columns"] = io::OrderedJson::array();
  for (const auto& column : columns) {
    json["columns"].push_back(column.pair);
  }
  json["rows"] = io::OrderedJson::array();
  for (int chapter : table_chapters(columns)) {
    std::vector<std::string> row{std::to_string(chapter)};
    io::OrderedJson values = io::OrderedJson::object();
    io::OrderedJson verses = io::OrderedJson::object();
    for (const auto& column : columns) {
      const ChapterJaccard* entry = chapter_entry(column.chapters, chapter);
      if (entry == nullptr) {
        row.emplace_back();
        values[column.pair] = nullptr;
        verses[column.pair] = nullptr;
      } else {
        row.push_back(io::format_fixed(entry->mean, 3));
        values[column.pair] = printed(entry->mean, 3);
        verses[column.pair] = entry->verses;
      }
    }
    csv += io::csv_row(row);
    io::OrderedJson record;
    record["chapter"] = chapter;
    record["values"] = std::move(values);
    record["verses"] = std::move(verses);
    json["rows"].push_back(std::move(record));
  }
  std::vector<std::string> average_row{"Average"};
  io::OrderedJson average = io::OrderedJson::object();
  for (const auto& column : columns) {
    if (column.chapters.empty()) {
      average_row.emplace_back();
      average[column.pair] = nullptr;
    } else {
      const double value = jaccard_average(column);
      average_row.push_back(io::format_fixed(value, 3));
      average[column.pair] = printed(value, 3);
    }
  }
  csv += io::csv_row(average_row);
  json["average"] = std::move(average);
  return {csv, io::dump_pretty(json) + "\n"};
}

std::string format_cosine_cell(double mean, double stddev) {
  return io::format_fixed(mean, 2) + "(" + io::format_fixed(stddev, 3) + ")";
}

std::pair<double, double> parse_cosine_cell(std::string_view cell) {
  const auto fail = [&] {
    return FormatError("not a mean(std) cell: '" + std::string(cell) + "'");
  };
  const std::size_t open = cell.find('(');
  if (open == std::string_view::npos || cell.empty() || cell.back() != ')') {
    throw fail();
  }
  auto parse = [&](std::string_view text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
      throw fail();
    }
    return value;
  };
  return {parse(cell.substr(0, open)), parse(cell.substr(open + 1, cell.size() - open - 2))};
}

ChapterStats cosine_average(const CosineColumn& column) {
  if (column.chapters.empty()) {
    throw Error("no chapters in cosine column '" + column.pair + "'");
  }
  ChapterStats out;
  double sum_means = 0.0;
  for (const auto& entry : column.chapters) {
    sum_means += entry.mean;
    out.n += entry.n;
  }
  out.mean = sum_means / static_cast<double>(column.chapters.size());
  if (column.pooled) {
    out.stddev = column.pooled->stddev;
    out.n = column.pooled->n;
    return out;
  }
  const bool counted = std::all_of(column.chapters.begin(), column.chapters.end(),
                                   [](const ChapterStats& s) { return s.n > 0; });
  double weight = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (const auto& entry : column.chapters) {
    const double w = counted ? static_cast<double>(entry.n) : 1.0;
    weight += w;
    first += w * entry.mean;
    second += w * (entry.stddev * entry.stddev + entry.mean * entry.mean);
  }
  const double pooled_mean = first / weight;
  out.stddev = std::sqrt(std::max(0.0, second / weight - pooled_mean * pooled_mean));
  return out;
}

TableArtifact render_cosine_table(const std::vector<CosineColumn>& columns) {
  std::string csv = io::csv_row(header_row(columns));
  io::OrderedJson json;
  json["columns"] = io::OrderedJson::array();
  for (const auto& column : columns) {
    json["columns"].push_back(column.pair);
  }
  auto cell_json = [](const ChapterStats& stats) {
    io::OrderedJson cell;
    cell["cell"] = format_cosine_cell(stats.mean, stats.stddev);
    cell["mean"] = printed(stats.mean, 2);
    cell["std"] = printed(stats.stddev, 3);
    cell["n"] = stats.n;
    return cell;
  };
  json["rows"] = io::OrderedJson::array();
  for (int chapter : table_chapters(columns)) {
    std::vector<std::string> row{std::to_string(chapter)};
    io::OrderedJson cells = io::OrderedJson::object();
    for (const auto& column : columns) {
      const ChapterStats* entry = chapter_entry(column.chapters, chapter);
      if (entry == nullptr) {
        row.emplace_back();
        cells[column.pair] = nullptr;
      } else {
        row.push_back(format_cosine_cell(entry->mean, entry->stddev));
        cells[column.pair] = cell_json(*entry);
      }
    }
    csv += io::csv_row(row);
    io::OrderedJson record;
    record["chapter"] = chapter;
    record["cells"] = std::move(cells);
    json["rows"].push_back(std::move(record));
  }
  std::vector<std::string> average_row{"Average"};
  io::OrderedJson average = io::OrderedJson::object();
  for (const auto& column : columns) {
    if (column.chapters.empty()) {
      average_row.emplace_back();
      average[column.pair] = nullptr;
      continue;
    }
    const ChapterStats stats = cosine_average(column);
    average_row.push_back(format_cosine_cell(stats.mean, stats.stddev));
    io::OrderedJson cell = cell_json(stats);
    if (column.pooled) {
      cell["pooled"] = cell_json(*column.pooled);
    }
    average[column.pair] = std::move(cell);
  }
  csv += io::csv_row(average_row);
  json["average"] = std::move(average);
  return {csv, io::dump_pretty(json) + "\n"};
}

// --- svg -----------------------------------------------------------------------

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

namespace {

constexpr const char* kSvgHeader = R"(<?xml version="1.0" encoding="UTF-8"?>)"
                                   "\n";
constexpr const char* kFont = R"(font-family="DejaVu Sans, Arial, sans-serif")";

std::string hex_channel(long value) {
  constexpr char digits[] = "0123456789abcdef";
  const auto v = static_cast<unsigned>(std::clamp(value, 0L, 255L));
  return {digits[v >> 4], digits[v & 15]};
}

std::string shade(double t) {
  static constexpr int lo[3] = {247, 251, 255};
  static constexpr int hi[3] = {8, 48, 107};
  std::string out = "#";
  for (int c = 0; c < 3; ++c) {
    out += hex_channel(std::lround(lo[c] + (hi[c] - lo[c]) * t));
  }
  return out;
}

std::string value_label(double value) {
  if (std::isfinite(value) && value == std::trunc(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  return io::format_fixed(value, 3);
}

}  // namespace

std::string render_heatmap_svg(const CooccurrenceMatrix& counts, const std::string& title) {
  constexpr int kCell = 44;
  constexpr int kLeft = 120;
  constexpr int kTop = 140;
  constexpr int n = static_cast<int>(kNumLabels);
  const int width = kLeft + n * kCell + 20;
  const int height = kTop + n * kCell + 20;
  const std::int64_t max = std::max<std::int64_t>(counts.maxCoeff(), 0);

  std::string svg = kSvgHeader;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "<title>" + xml_escape(title) + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
  svg += std::string("<text x=\"10\" y=\"24\" font-size=\"16\" ") + kFont + ">" +
         xml_escape(title) + "</text>\n";
  for (int j = 0; j < n; ++j) {
    const int x = kLeft + j * kCell + kCell / 2;
    const int y = kTop - 8;
    svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" font-size=\"12\" " + kFont + " transform=\"rotate(-45 " + std::to_string(x) + " " +
           std::to_string(y) + ")\">" + std::string(kLabelNames[static_cast<std::size_t>(j)]) +
           "</text>\n";
  }
  for (int i = 0; i < n; ++i) {
    const int y = kTop + i * kCell;
    svg += "<text x=\"" + std::to_string(kLeft - 8) + "\" y=\"" + std::to_string(y + kCell / 2 + 4) +
           "\" font-size=\"12\" text-anchor=\"end\" " + kFont + ">" +
           std::string(kLabelNames[static_cast<std::size_t>(i)]) + "</text>\n";
    for (int j = 0; j < n; ++j) {
      const int x = kLeft + j * kCell;
      const std::int64_t count = counts(i, j);
      const double t = max > 0 ? static_cast<double>(count) / static_cast<double>(max) : 0.0;
      svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
             std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) + "\" fill=\"" +
             shade(t) + "\" stroke=\"#ffffff\"/>\n";
      svg += "<text x=\"" + std::to_string(x + kCell / 2) + "\" y=\"" +
             std::to_string(y + kCell / 2 + 4) + "\" font-size=\"12\" text-anchor=\"middle\" " +
             kFont + " fill=\"" + (t > 0.5 ? "#ffffff" : "#000000") + "\">" +
             std::to_string(count) + "</text>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_bars_svg(const std::vector<Bar>& bars, const std::string& title) {
  if (bars.empty()) {
    throw std::invalid_argument("render_bars_svg: no bars");
  }
  constexpr int kRow = 24;
  constexpr int kTop = 40;
  constexpr int kBarArea = 400;
  std::size_t longest = 0;
  double max = 0.0;
  for (const auto& bar : bars) {
    longest = std::max(longest, unicode::decode(bar.label).size());
    max = std::max(max, bar.value);
  }
  const int label_width = std::clamp(static_cast<int>(longest) * 7 + 12, 80, 420);
  const int width = label_width + kBarArea + 80;
  const int height = kTop + static_cast<int>(bars.size()) * kRow + 16;

  std::string svg = kSvgHeader;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "<title>" + xml_escape(title) + "</title>\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
  svg += std::string("<text x=\"10\" y=\"24\" font-size=\"16\" ") + kFont + ">" +
         xml_escape(title) + "</text>\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const int y = kTop + static_cast<int>(i) * kRow;
    const double length =
        max > 0.0 ? std::max(0.0, bars[i].value) / max * static_cast<double>(kBarArea) : 0.0;
    svg += "<text x=\"" + std::to_string(label_width - 6) + "\" y=\"" + std::to_string(y + 16) +
           "\" font-size=\"12\" text-anchor=\"end\" " + kFont + ">" + xml_escape(bars[i].label) +
           "</text>\n";
    svg += "<rect x=\"" + std::to_string(label_width) + "\" y=\"" + std::to_string(y + 4) +
           "\" width=\"" + io::format_fixed(length, 2) + "\" height=\"16\" fill=\"#4682b4\"/>\n";
    svg += "<text x=\"" + io::format_fixed(label_width + length + 6.0, 2) + "\" y=\"" +
           std::to_string(y + 16) + "\" font-size=\"12\" " + kFont + ">" +
           value_label(bars[i].value) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<Bar> ngram_bars(const std::vector<NGramCount>& ranked) {
  std::vector<Bar> bars;
  bars.reserve(ranked.size());
  for (const auto& entry : ranked) {
    bars.push_back({entry.joined(), static_cast<double>(entry.count)});
  }
  return bars;
}

std::vector<Bar> label_bars(const LabelCounts& counts) {
  std::vector<Bar> bars;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    bars.push_back({std::string(kLabelNames[i]),
                    static_cast<double>(counts[static_cast<Eigen::Index>(i)])});
  }
  return bars;
}

TableArtifact render_extremes(const std::vector<ExtremeVerse>& rows) {
  std::string csv = io::csv_row({"pair", "chapter", "verse", "score", "text_a", "text_b"});
  io::OrderedJson json = io::OrderedJson::array();
  for (const auto& row : rows) {
    csv += io::csv_row({row.pair, std::to_string(row.record.ref.chapter),
                        std::to_string(row.record.ref.verse),
                        io::format_fixed(row.record.score, 6), row.text_a, row.text_b});
    io::OrderedJson record;
    record["pair"] = row.pair;
    record["chapter"] = row.record.ref.chapter;
    record["verse"] = row.record.ref.verse;
    record["score"] = printed(row.record.score, 6);
    record["text_a"] = row.text_a;
    record["text_b"] = row.text_b;
    json.push_back(std::move(record));
  }
  return {csv, io::dump_pretty(json) + "\n"};
}

// --- pipeline ------------------------------------------------------------------

namespace {

TranslationCorpus restrict_chapters(const TranslationCorpus& corpus, const std::vector<int>& chapters,
                                    Warnings& warnings) {
  if (chapters.empty()) {
    return corpus;
  }
  TranslationCorpus out(corpus.id(), corpus.title(), corpus.translator(), corpus.language(),
                        corpus.source());
  for (int chapter : chapters) {
    const auto verses = chapter_slice(corpus, chapter);
    if (verses.empty()) {
      warnings.push_back({std::nullopt, "corpus '" + corpus.id() + "' has no chapter " +
                                            std::to_string(chapter)});
    }
    for (const auto& verse : verses) {
      out.add(verse);
    }
  }
  if (out.empty()) {
    throw ValidationError("corpus '" + corpus.id() + "' has none of the selected chapters");
  }
  return out;
}

struct CorpusAnalysis {
  TranslationCorpus corpus;
  SentimentPredictions predictions;
  EmbeddingSet embeddings;
};

class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path root, const std::set<ReportFormat>& formats)
      : root_(std::move(root)), formats_(formats) {}

  bool wants(ReportFormat format) const { return formats_.count(format) != 0; }

  void write(ReportFormat format, const std::filesystem::path& relative, std::string_view content) {
    if (!wants(format)) {
      return;
    }
    io::write_file(root_ / relative, content);
    written_.push_back(relative);
  }

  void table(const std::filesystem::path& stem, const TableArtifact& artifact) {
    write(ReportFormat::csv, stem.string() + ".csv", artifact.csv);
    write(ReportFormat::json, stem.string() + ".json", artifact.json);
  }

  std::vector<std::filesystem::path> written() const {
    auto out = written_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::filesystem::path root_;
  std::set<ReportFormat> formats_;
  std::vector<std::filesystem::path> written_;
};

std::string keywords_csv(const std::vector<Keyword>& keywords) {
  std::string csv = io::csv_row({"rank", "phrase", "relevance"});
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    csv += io::csv_row({std::to_string(i + 1), keywords[i].phrase,
                        io::format_fixed(keywords[i].relevance, 6)});
  }
  return csv;
}

std::vector<int> shared_chapters(const TranslationCorpus& a, const TranslationCorpus& b) {
  const auto left = a.chapters();
  const auto right = b.chapters();
  std::vector<int> out;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace

ReportResult run_report(const ReportSpec& spec, const CorpusSet& corpora,
                        const SentimentProvider& sentiment, const EmbeddingProvider& embedding,
                        const ReportOptions& options) {
  spec.validate();
  ReportResult result;
  ArtifactWriter out(spec.output_dir, spec.formats);

  std::map<std::string, CorpusAnalysis> analyses;
  for (const auto& id : spec.all_corpus_ids()) {
    TranslationCorpus corpus = restrict_chapters(corpora.at(id), spec.chapters, result.warnings);
    SentimentPredictions predictions =
        predict_corpus(sentiment, corpus, options.threshold, options.batch_size);
    EmbeddingSet embeddings = embed_corpus(embedding, corpus, options.batch_size);
    const std::filesystem::path dir = id;

    for (std::size_t n : {2u, 3u}) {
      const auto ranked = top_ngrams(corpus, n, options.ngram_k, options.stoplist);
      const std::string stem = "ngrams_" + std::to_string(n);
      out.write(ReportFormat::csv, dir / (stem + ".csv"), ngrams_to_csv(ranked));
      if (ranked.empty()) {
        result.warnings.push_back({std::nullopt, "corpus '" + id + "' has no " +
                                                     std::to_string(n) + "-grams to chart"});
      } else {
        out.write(ReportFormat::svg, dir / (stem + ".svg"),
                  render_bars_svg(ngram_bars(ranked),
                                  id + ": top " + std::to_string(n) + "-grams"));
      }
    }
    out.write(ReportFormat::svg, dir / "heatmap.svg",
              render_heatmap_svg(cooccurrence(predictions), id + ": sentiment co-occurrence"));
    out.write(ReportFormat::svg, dir / "sentiment_cumulative.svg",
              render_bars_svg(label_bars(cumulative_counts(predictions)),
                              id + ": cumulative sentiments"));
    out.write(ReportFormat::json, dir / "predictions.jsonl", predictions_to_jsonl(predictions));
    out.write(ReportFormat::json, dir / "embeddings.jsonl", embeddings_to_jsonl(embeddings));
    if (options.keywords && out.wants(ReportFormat::csv)) {
      std::string document;
      for (const auto& [ref, verse] : corpus.verses()) {
        document += verse.clean_text;
        document += '\n';
      }
      out.write(ReportFormat::csv, dir / "keywords.csv",
                keywords_csv(mmr_keywords(document, embedding, options.keyword_options,
                                          options.stoplist)));
    }
    analyses.emplace(id, CorpusAnalysis{std::move(corpus), std::move(predictions),
                                        std::move(embeddings)});
  }

  std::vector<JaccardColumn> jaccard_columns;
  std::vector<CosineColumn> cosine_columns;
  std::vector<ExtremeVerse> most;
  std::vector<ExtremeVerse> least;
  for (const auto& pair : spec.pairs) {
    const CorpusAnalysis& a = analyses.at(pair.a);
    const CorpusAnalysis& b = analyses.at(pair.b);
    const std::string name = pair.name();
    const std::vector<int> chapters = shared_chapters(a.corpus, b.corpus);
    if (chapters.empty()) {
      throw ValidationError("pair '" + name + "' shares no chapters");
    }

    JaccardColumn jaccard_column{name, {}};
    for (int chapter : chapters) {
      try {
        jaccard_column.chapters.push_back(
            chapter_jaccard(a.predictions, b.predictions, chapter, options.empty_pairs));
      } catch (const Error& e) {
        result.warnings.push_back({std::nullopt, name + ": " + e.what()});
      }
    }

    SimilarityResult similarities = verse_similarities(a.embeddings, b.embeddings);
    for (auto& warning : similarities.warnings) {
      warning.message = name + ": " + warning.message;
      result.warnings.push_back(std::move(warning));
    }
    CosineColumn cosine_column{name, {}, std::nullopt};
    std::vector<int> scored;
    for (int chapter : chapters) {
      const bool any = std::any_of(similarities.records.begin(), similarities.records.end(),
                                   [&](const SimilarityRecord& r) { return r.ref.chapter == chapter; });
      if (any) {
        cosine_column.chapters.push_back(chapter_stats(similarities.records, chapter));
        scored.push_back(chapter);
      }
    }
    if (!scored.empty()) {
      cosine_column.pooled = pooled_stats(similarities.records, scored);
    }

    const std::filesystem::path dir = name;
    out.table(dir / "jaccard", render_jaccard_table({jaccard_column}));
    out.table(dir / "cosine", render_cosine_table({cosine_column}));
    out.write(ReportFormat::csv, dir / "similarities.csv", similarities_to_csv(similarities.records));

    auto annotate = [&](const std::vector<SimilarityRecord>& records, std::vector<ExtremeVerse>& sink) {
      for (const auto& record : records) {
        sink.push_back({name, record, a.corpus.find(record.ref)->clean_text,
                        b.corpus.find(record.ref)->clean_text});
      }
    };
    annotate(extremes(similarities.records, options.extremes_k, Direction::most), most);
    annotate(extremes(similarities.records, options.extremes_k, Direction::least), least);

    jaccard_columns.push_back(std::move(jaccard_column));
    cosine_columns.push_back(std::move(cosine_column));
  }

  out.table("jaccard", render_jaccard_table(jaccard_columns));
  out.table("cosine", render_cosine_table(cosine_columns));
  out.table("extremes_most", render_extremes(most));
  out.table("extremes_least", render_extremes(least));

  result.artifacts = out.written();
  return result;
}

}  // namespace verse_eval
