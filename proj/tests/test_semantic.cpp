#include <doctest.h>

#include <map>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "verse_eval/semantic.hpp"

using namespace verse_eval;

namespace {

std::vector<SimilarityRecord> records_of(const std::vector<std::pair<VerseRef, double>>& scores) {
  std::vector<SimilarityRecord> out;
  for (const auto& [ref, score] : scores) out.push_back({ref, score, {"A", "B"}});
  return out;
}

// Embeds by table lookup, for fixtures with chosen geometry.
class TableEmbedding final : public EmbeddingProvider {
 public:
  explicit TableEmbedding(std::map<std::string, EmbeddingVector> table) : table_(std::move(table)) {}
  std::string model_id() const override { return "table"; }
  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) const override {
    std::vector<EmbeddingVector> out;
    for (const auto& text : texts) out.push_back(table_.at(text));
    return out;
  }

 private:
  std::map<std::string, EmbeddingVector> table_;
};

}  // namespace

TEST_SUITE("semantic") {

TEST_CASE("cosine examples") {
  Eigen::Vector3d u(1, 0, 0);
  Eigen::Vector3d v(0, 2, 0);
  CHECK(cosine(u, v) == 0.0);
  CHECK(cosine(u, u) == doctest::Approx(1.0));
  CHECK(cosine(u, Eigen::Vector3d(-3, 0, 0)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(cosine(u, Eigen::Vector3d::Zero().eval()), ValidationError);
  CHECK_THROWS_AS(cosine(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(4)), ValidationError);
}

TEST_CASE("cosine matches the oracle, is symmetric and scale invariant") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd u(16);
    Eigen::VectorXd v(16);
    for (int i = 0; i < 16; ++i) {
      u[i] = gauss(rng);
      v[i] = gauss(rng);
    }
    const double c = cosine(u, v);
    CHECK(std::abs(c - oracle::cosine({u.data(), u.data() + 16}, {v.data(), v.data() + 16})) <= 1e-12);
    CHECK(c == doctest::Approx(cosine(v, u)).epsilon(1e-14));
    CHECK(c == doctest::Approx(cosine((scale(rng) * u).eval(), v)).epsilon(1e-12));
    CHECK(c >= -1.0 - 1e-12);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("embedding sets validate dimension and finiteness") {
  EmbeddingSet set("GT", "m", 3);
  set.add({1, 1}, Eigen::VectorXd::Ones(3));
  CHECK_THROWS_AS(set.add({1, 2}, Eigen::VectorXd::Ones(4)), ValidationError);
  CHECK_THROWS_AS(set.add({1, 1}, Eigen::VectorXd::Ones(3)), ValidationError);
  Eigen::VectorXd bad = Eigen::VectorXd::Ones(3);
  bad[1] = INFINITY;
  CHECK_THROWS_AS(set.add({1, 3}, bad), ValidationError);
}

TEST_CASE("verse_similarities pairs shared refs") {
  EmbeddingSet a("A", "m", 2);
  EmbeddingSet b("B", "m", 2);
  a.add({1, 1}, Eigen::Vector2d(1, 0));
  a.add({1, 2}, Eigen::Vector2d(1, 1));
  b.add({1, 2}, Eigen::Vector2d(1, 0));
  b.add({1, 3}, Eigen::Vector2d(0, 1));
  const auto result = verse_similarities(a, b);
  REQUIRE(result.records.size() == 1);
  CHECK(result.records[0].ref == VerseRef{1, 2});
  CHECK(result.records[0].score == doctest::Approx(std::sqrt(0.5)));
  CHECK(result.warnings.size() == 2);
  CHECK(pair_name(result.records[0].pair) == "A-B");
  CHECK_THROWS_AS(verse_similarities(a, EmbeddingSet("C", "m", 3)), ValidationError);
}

TEST_CASE("chapter statistics use the population deviation") {
  const auto records = records_of({{{1, 1}, 0.2}, {{1, 2}, 0.4}, {{1, 3}, 0.6}, {{2, 1}, 0.9}});
  const ChapterStats s = chapter_stats(records, 1);
  CHECK(s.n == 3);
  CHECK(s.mean == doctest::Approx(0.4));
  CHECK(s.stddev == doctest::Approx(std::sqrt(0.08 / 3.0)));
  const ChapterStats single = chapter_stats(records, 2);
  CHECK(single.stddev == 0.0);
  CHECK_THROWS_AS(chapter_stats(records, 3), Error);
  const ChapterStats pooled = pooled_stats(records, {1, 2});
  CHECK(pooled.n == 4);
  CHECK(pooled.mean == doctest::Approx(0.525));
}

TEST_CASE("chapter statistics agree with a naive computation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<VerseRef, double>> scores;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int v = 1; v <= n; ++v) scores.push_back({{5, v}, unit(rng)});
    const ChapterStats s = chapter_stats(records_of(scores), 5);
    long double sum = 0;
    for (const auto& [ref, x] : scores) sum += x;
    const long double mean = sum / n;
    long double ss = 0;
    for (const auto& [ref, x] : scores) ss += (x - mean) * (x - mean);
    CHECK(s.mean == doctest::Approx(static_cast<double>(mean)).epsilon(1e-12));
    CHECK(s.stddev == doctest::Approx(std::sqrt(static_cast<double>(ss / n))).epsilon(1e-9));
  }
}

TEST_CASE("extremes partition the records") {
  const auto records =
      records_of({{{1, 1}, 0.5}, {{1, 2}, 0.9}, {{1, 3}, 0.5}, {{1, 4}, 0.1}, {{1, 5}, 0.7}});
  const auto most = extremes(records, 2, Direction::most);
  const auto least = extremes(records, 3, Direction::least);
  REQUIRE(most.size() == 2);
  REQUIRE(least.size() == 3);
  CHECK(most[0].ref == VerseRef{1, 2});
  CHECK(most[1].ref == VerseRef{1, 5});
  CHECK(least[0].ref == VerseRef{1, 4});
  CHECK(least[1].ref == VerseRef{1, 1});  // tie broken by ref order
  CHECK(least[2].ref == VerseRef{1, 3});
  for (const auto& m : most) {
    for (const auto& l : least) CHECK(m.ref != l.ref);
  }
  CHECK(extremes(records, 10, Direction::most).size() == 5);
}

TEST_CASE("mmr_select reproduces the hand-evaluated fixture") {
  Eigen::VectorXd relevance(3);
  relevance << 0.9, 0.85, 0.2;
  Eigen::MatrixXd similarity(3, 3);
  similarity << 1.0, 0.95, 0.1,  //
      0.95, 1.0, 0.3,            //
      0.1, 0.3, 1.0;
  CHECK(mmr_select(relevance, similarity, 2, 0.5) == std::vector<std::size_t>{0, 2});
  CHECK(mmr_select(relevance, similarity, 3, 1.0) == std::vector<std::size_t>{0, 1, 2});
  CHECK(mmr_select(relevance, similarity, 5, 0.5).size() == 3);
}

TEST_CASE("mmr_select matches the greedy oracle, ties included") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> level(0, 4);  // coarse values force ties
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 8);
    Eigen::VectorXd relevance(m);
    Eigen::MatrixXd similarity(m, m);
    std::vector<double> rel(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> sim(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
    for (int i = 0; i < m; ++i) {
      rel[static_cast<std::size_t>(i)] = relevance[i] = level(rng) / 4.0;
      for (int j = 0; j <= i; ++j) {
        const double s = i == j ? 1.0 : level(rng) / 4.0;
        similarity(i, j) = similarity(j, i) = s;
        sim[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
        sim[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = s;
      }
    }
    const double lambda = (1 + rng() % 4) / 4.0;
    const std::size_t k = 1 + rng() % 4;
    CHECK(mmr_select(relevance, similarity, k, lambda) == oracle::mmr(rel, sim, k, lambda));
  }
}

TEST_CASE("keyword candidates are distinct filtered ngrams in lexicographic order") {
  KeywordOptions options;
  options.ngram_min = 1;
  options.ngram_max = 2;
  const auto candidates =
      keyword_candidates("Peace follows renunciation; peace follows the calm.", options, default_stoplist());
  CHECK(candidates == std::vector<std::string>{"calm", "follows", "follows calm", "follows renunciation",
                                               "peace", "peace follows", "renunciation",
                                               "renunciation peace"});
  options.max_candidates = 2;
  // "calm" and "peace peace" tie on frequency; the lexicographically first wins.
  CHECK(keyword_candidates("peace peace peace calm calm river", options, Stoplist{}) ==
        std::vector<std::string>{"calm", "peace"});
}

TEST_CASE("mmr_keywords selects through the provider geometry") {
  // rel(c1)=0.9 style fixture realised with explicit vectors.
  std::map<std::string, EmbeddingVector> table;
  table["alpha beta gamma"] = Eigen::Vector3d(1, 0, 0);
  table["alpha"] = Eigen::Vector3d(0.9, 0.43589, 0);
  table["beta"] = Eigen::Vector3d(0.85, 0.52678, 0);
  table["gamma"] = Eigen::Vector3d(0.2, 0, 0.9798);
  const TableEmbedding provider(table);
  KeywordOptions options;
  options.ngram_max = 1;
  options.k = 2;
  const auto keywords = mmr_keywords("alpha beta gamma", provider, options, Stoplist{});
  REQUIRE(keywords.size() == 2);
  CHECK(keywords[0].phrase == "alpha");
  CHECK(keywords[1].phrase == "gamma");
  CHECK(keywords[0].relevance == doctest::Approx(0.9).epsilon(1e-4));
  CHECK_THROWS_AS(mmr_keywords("   ", provider, options, Stoplist{}), ValidationError);
}

TEST_CASE("embed_corpus and JSONL round trip") {
  TranslationCorpus corpus("GT", "t", "x", "en");
  corpus.add(make_verse({1, 1}, "peace"));
  corpus.add(make_verse({1, 2}, "fear"));
  const MockEmbeddingProvider provider;
  const EmbeddingSet set = embed_corpus(provider, corpus, 1);
  CHECK(set.dim() == kMockEmbeddingDim);
  CHECK(set.model_id() == "mock-hash-bow-16");
  const auto dir = testing::scratch("embeddings_roundtrip");
  save_embeddings(set, dir / "GT.jsonl");
  const EmbeddingSet back = load_embeddings(dir / "GT.jsonl");
  CHECK(embeddings_to_jsonl(back) == embeddings_to_jsonl(set));
  CHECK(*back.find({1, 2}) == *set.find({1, 2}));
}

TEST_CASE("similarities csv") {
  const auto csv = similarities_to_csv(records_of({{{3, 13}, 0.919}}));
  CHECK(csv == "chapter,verse,score,pair\n3,13,0.919,A-B\n");
}

}  // TEST_SUITE
