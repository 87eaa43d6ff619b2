#include <doctest.h>

#include <fstream>
#include <sstream>

#include "reference_tables.hpp"
#include "support.hpp"
#include "xml_check.hpp"
#include "verse_eval/io.hpp"
#include "verse_eval/report.hpp"

using namespace verse_eval;

namespace {

JaccardColumn reference_jaccard(std::size_t column) {
  JaccardColumn out{std::string(reference::kPairs[column]), {}};
  for (std::size_t i = 0; i < reference::kChapters.size(); ++i) {
    out.chapters.push_back({reference::kChapters[i], reference::kJaccard[column][i], 0});
  }
  return out;
}

CosineColumn reference_cosine(std::size_t column) {
  CosineColumn out{std::string(reference::kPairs[column]), {}, std::nullopt};
  for (std::size_t i = 0; i < reference::kChapters.size(); ++i) {
    const auto [mean, stddev] = parse_cosine_cell(reference::kCosine[column][i]);
    out.chapters.push_back({reference::kChapters[i], mean, stddev, 0});
  }
  return out;
}

std::vector<std::string> csv_lines(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("jaccard table renders 3-decimal rows and an Average row") {
  const TableArtifact table = render_jaccard_table({reference_jaccard(0)});
  const auto lines = csv_lines(table.csv);
  REQUIRE(lines.size() == 13);
  CHECK(lines[0] == "chapter,GT-Gandhi");
  CHECK(lines[1] == "3,0.420");
  CHECK(lines[11] == "17,0.323");
  CHECK(lines[12] == "Average,0.338");
  CHECK(jaccard_average(reference_jaccard(0)) == doctest::Approx(3.715 / 11.0));
}

TEST_CASE("jaccard JSON numbers are the CSV numbers") {
  std::vector<JaccardColumn> columns;
  for (std::size_t c = 0; c < 4; ++c) columns.push_back(reference_jaccard(c));
  const TableArtifact table = render_jaccard_table(columns);
  const auto json = io::Json::parse(table.json);
  const auto lines = csv_lines(table.csv);
  REQUIRE(json.at("rows").size() == 11);
  for (std::size_t r = 0; r < 11; ++r) {
    std::string expected = std::to_string(json["rows"][r]["chapter"].get<int>());
    for (const auto& pair : reference::kPairs) {
      expected += "," + io::format_fixed(json["rows"][r]["values"][std::string(pair)].get<double>(), 3);
    }
    CHECK(lines[r + 1] == expected);
  }
  CHECK(io::format_fixed(json["average"]["GT-Purohit"].get<double>(), 3) == "0.347");
}

TEST_CASE("cosine cells format and parse") {
  CHECK(format_cosine_cell(0.52, 0.156) == "0.52(0.156)");
  CHECK(format_cosine_cell(0.5, 0.0) == "0.50(0.000)");
  CHECK(format_cosine_cell(0.91949, 0.0) == "0.92(0.000)");
  CHECK(parse_cosine_cell("0.52(0.156)") == std::pair<double, double>{0.52, 0.156});
  for (const auto& column : reference::kCosine) {
    for (const auto& cell : column) {
      const auto [m, s] = parse_cosine_cell(cell);
      CHECK(format_cosine_cell(m, s) == cell);
    }
  }
  CHECK_THROWS_AS(parse_cosine_cell("0.52"), FormatError);
  CHECK_THROWS_AS(parse_cosine_cell("0.52(0.156"), FormatError);
  CHECK_THROWS_AS(parse_cosine_cell("x(0.1)"), FormatError);
}

TEST_CASE("cosine average is the mean of chapter means with a pooled deviation") {
  CosineColumn column{"A-B", {{1, 0.2, 0.1, 2}, {2, 0.4, 0.1, 2}}, std::nullopt};
  const ChapterStats avg = cosine_average(column);
  CHECK(avg.mean == doctest::Approx(0.3));
  // Pooled variance: within 0.01 plus between 0.01.
  CHECK(avg.stddev == doctest::Approx(std::sqrt(0.02)));
  CHECK(avg.n == 4);
  column.pooled = ChapterStats{0, 0.31, 0.5, 4};
  CHECK(cosine_average(column).stddev == 0.5);
  CHECK(cosine_average(column).mean == doctest::Approx(0.3));
}

TEST_CASE("cosine table renders reference cells verbatim") {
  const TableArtifact table = render_cosine_table({reference_cosine(1)});
  const auto lines = csv_lines(table.csv);
  CHECK(lines[0] == "chapter,GT-Purohit");
  CHECK(lines[1] == "3,0.58(0.148)");
  CHECK(lines[12].rfind("Average,0.43(", 0) == 0);
  const auto json = io::Json::parse(table.json);
  CHECK(json["rows"][0]["cells"]["GT-Purohit"]["cell"] == "0.58(0.148)");
}

TEST_CASE("heatmap SVG is deterministic and well formed") {
  CooccurrenceMatrix m = CooccurrenceMatrix::Zero();
  m(0, 0) = 5;
  m(0, 1) = m(1, 0) = 3;
  m(1, 1) = 4;
  const std::string a = render_heatmap_svg(m, "GT & <friends>");
  CHECK(a == render_heatmap_svg(m, "GT & <friends>"));
  CHECK(testing::xml_problem(a) == "");
  CHECK(a.find("GT &amp; &lt;friends&gt;") != std::string::npos);
  CHECK(a.find("optimistic") != std::string::npos);
  CHECK(testing::xml_problem(render_heatmap_svg(CooccurrenceMatrix::Zero(), "empty")) == "");
}

TEST_CASE("bar SVG") {
  const std::string svg = render_bars_svg({{"fruit action", 3}, {"peace", 1}}, "top");
  CHECK(testing::xml_problem(svg) == "");
  CHECK(svg == render_bars_svg({{"fruit action", 3}, {"peace", 1}}, "top"));
  CHECK_THROWS_AS(render_bars_svg({}, "none"), std::invalid_argument);
  CHECK(ngram_bars({{{"a", "b"}, 2}})[0].label == "a b");
  LabelCounts counts = LabelCounts::Zero();
  counts[3] = 7;
  CHECK(label_bars(counts)[3].value == 7.0);
  CHECK(label_bars(counts)[3].label == "pessimistic");
}

TEST_CASE("xml escaping") {
  CHECK(xml_escape("a<b>&\"c'") == "a&lt;b&gt;&amp;&quot;c&apos;");
  CHECK(testing::xml_problem("<a><b/></a>") == "");
  CHECK(testing::xml_problem("<a><b></a>") != "");
  CHECK(testing::xml_problem("<a>x & y</a>") != "");
}

TEST_CASE("report spec validation") {
  ReportSpec spec;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.pairs = {{"GT", "Gandhi"}};
  spec.output_dir = "out";
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.all_corpus_ids() == std::vector<std::string>{"GT", "Gandhi"});
  spec.pairs.push_back({"GT", "GT"});
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.pairs.pop_back();
  spec.formats.clear();
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  CHECK(parse_report_format("svg") == ReportFormat::svg);
  CHECK_THROWS(parse_report_format("pdf"));
}

TEST_CASE("run_report over the fixture corpora") {
  const CorpusSet corpora = load_corpus_set(testing::fixtures() / "corpora");
  ReportSpec spec;
  spec.pairs = {{"GT", "Gandhi"}, {"Gandhi", "Easwaran"}};
  spec.output_dir = testing::scratch("run_report");
  const MockSentimentProvider sentiment;
  const MockEmbeddingProvider embedding;
  const ReportResult result = run_report(spec, corpora, sentiment, embedding);

  std::vector<std::string> artifacts;
  for (const auto& path : result.artifacts) artifacts.push_back(path.generic_string());
  std::vector<std::string> expected = {"cosine.csv", "cosine.json", "extremes_least.csv",
                                       "extremes_least.json", "extremes_most.csv",
                                       "extremes_most.json", "jaccard.csv", "jaccard.json"};
  for (const char* id : {"Easwaran", "GT", "Gandhi"}) {
    for (const char* name : {"embeddings.jsonl", "heatmap.svg", "keywords.csv", "ngrams_2.csv",
                             "ngrams_2.svg", "ngrams_3.csv", "ngrams_3.svg", "predictions.jsonl",
                             "sentiment_cumulative.svg"}) {
      expected.push_back(std::string(id) + "/" + name);
    }
  }
  for (const char* pair : {"GT-Gandhi", "Gandhi-Easwaran"}) {
    for (const char* name : {"cosine.csv", "cosine.json", "jaccard.csv", "jaccard.json", "similarities.csv"}) {
      expected.push_back(std::string(pair) + "/" + name);
    }
  }
  CHECK(std::is_sorted(result.artifacts.begin(), result.artifacts.end()));
  std::sort(artifacts.begin(), artifacts.end());
  std::sort(expected.begin(), expected.end());
  CHECK(artifacts == expected);
  for (const auto& path : result.artifacts) {
    CHECK(std::filesystem::exists(spec.output_dir / path));
    if (path.extension() == ".svg") {
      INFO(path);
      CHECK(testing::xml_problem(io::read_file(spec.output_dir / path)) == "");
    }
  }
  const auto jaccard = csv_lines(io::read_file(spec.output_dir / "jaccard.csv"));
  CHECK(jaccard[0] == "chapter,GT-Gandhi,Gandhi-Easwaran");
  CHECK(jaccard.size() == 4);
}

TEST_CASE("run_report with csv only writes no svg") {
  const CorpusSet corpora = load_corpus_set(testing::fixtures() / "corpora");
  ReportSpec spec;
  spec.pairs = {{"GT", "Purohit"}};
  spec.formats = {ReportFormat::csv};
  spec.output_dir = testing::scratch("run_report_csv");
  const ReportResult result =
      run_report(spec, corpora, MockSentimentProvider{}, MockEmbeddingProvider{});
  for (const auto& path : result.artifacts) {
    CHECK(path.extension() != ".svg");
    CHECK(path.extension() != ".json");
  }
}

TEST_CASE("run_report rejects an unknown corpus") {
  const CorpusSet corpora = load_corpus_set(testing::fixtures() / "corpora");
  ReportSpec spec;
  spec.pairs = {{"GT", "Tilak"}};
  spec.output_dir = testing::scratch("run_report_unknown");
  CHECK_THROWS(run_report(spec, corpora, MockSentimentProvider{}, MockEmbeddingProvider{}));
}

}  // TEST_SUITE
