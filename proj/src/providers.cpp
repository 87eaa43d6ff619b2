#include "verse_eval/providers.hpp"

#include <algorithm>
#include <charconv>
#include <thread>
#include <unordered_map>

#include "verse_eval/io.hpp"
#include "verse_eval/textstats.hpp"
#include "verse_eval/unicode.hpp"
#include "data_sentiment_lexicon.hpp"

namespace verse_eval {

std::string_view to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::mock:
      return "mock";
    case ProviderKind::file:
      return "file";
    case ProviderKind::http:
      return "http";
  }
  return "unknown";
}

ProviderKind parse_provider_kind(std::string_view name) {
  if (name == "mock") return ProviderKind::mock;
  if (name == "file") return ProviderKind::file;
  if (name == "http") return ProviderKind::http;
  throw ValidationError("unknown provider kind '" + std::string(name) +
                        "' (expected mock, file or http)");
}

void ProviderConfig::validate() const {
  if (batch_size < 1) {
    throw ValidationError("provider batch_size must be >= 1");
  }
  if (max_retries < 0) {
    throw ValidationError("provider max_retries must be >= 0");
  }
  if (max_in_flight < 1) {
    throw ValidationError("provider max_in_flight must be >= 1");
  }
  if (!(timeout.count() > 0.0)) {
    throw ValidationError("provider timeout must be positive");
  }
  const bool has_endpoint = !endpoint.empty();
  const bool has_file = !file_path.empty();
  switch (kind) {
    case ProviderKind::mock:
      if (has_endpoint || has_file) {
        throw ValidationError("mock provider takes neither an endpoint nor a file");
      }
      break;
    case ProviderKind::file:
      if (!has_file) {
        throw ValidationError("file provider requires a file path");
      }
      if (has_endpoint) {
        throw ValidationError("file provider does not take an endpoint");
      }
      break;
    case ProviderKind::http:
      if (!has_endpoint) {
        throw ValidationError("http provider requires an endpoint");
      }
      if (has_file) {
        throw ValidationError("http provider does not take a file path");
      }
      break;
  }
}

std::chrono::duration<double> RetryPolicy::backoff_before(int attempt) const {
  if (attempt <= 1) {
    return std::chrono::duration<double>(0.0);
  }
  double wait = initial_backoff.count();
  for (int i = 2; i < attempt; ++i) {
    wait *= multiplier;
  }
  return std::chrono::duration<double>(std::min(wait, max_backoff.count()));
}

Sleeper real_sleeper() {
  return [](std::chrono::duration<double> d) { std::this_thread::sleep_for(d); };
}

// --- mock ------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Entries uniform in [-1, 1); every operation is exact in binary64.
EmbeddingVector hashed_vector(std::string_view key) {
  std::uint64_t state = io::fnv1a64(key);
  EmbeddingVector v(kMockEmbeddingDim);
  for (int i = 0; i < kMockEmbeddingDim; ++i) {
    const double unit = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    v[i] = 2.0 * unit - 1.0;
  }
  return v;
}

struct LexiconEntry {
  SentimentLabel label;
  double weight;
};

std::unordered_map<std::string, std::vector<LexiconEntry>> parse_lexicon(std::string_view text) {
  std::unordered_map<std::string, std::vector<LexiconEntry>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line.front() == '#') {
      continue;
    }
    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = line.find('\t', tab1 + 1);
    if (tab1 == std::string_view::npos || tab2 == std::string_view::npos) {
      throw FormatError("malformed lexicon line: " + std::string(line));
    }
    const std::string word(line.substr(0, tab1));
    const SentimentLabel label = parse_label(line.substr(tab1 + 1, tab2 - tab1 - 1));
    const std::string_view number = line.substr(tab2 + 1);
    double weight = 0.0;
    const auto [stop, ec] = std::from_chars(number.data(), number.data() + number.size(), weight);
    if (ec != std::errc() || stop != number.data() + number.size()) {
      throw FormatError("malformed lexicon weight: " + std::string(line));
    }
    out[word].push_back({label, weight});
  }
  return out;
}

const std::unordered_map<std::string, std::vector<LexiconEntry>>& lexicon() {
  static const auto table = parse_lexicon(data::kSentimentLexicon);
  return table;
}

}  // namespace

EmbeddingVector mock_embedding(std::string_view text) {
  const std::string normalized = unicode::nfc(text);
  EmbeddingVector v = 0.25 * hashed_vector("doc\x1f" + normalized);
  for (const auto& token : tokenize(normalized)) {
    v += hashed_vector("tok\x1f" + token);
  }
  if (v.squaredNorm() == 0.0) {
    v[0] = 1.0;
  }
  return v;
}

std::vector<EmbeddingVector> MockEmbeddingProvider::embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    out.push_back(mock_embedding(text));
  }
  return out;
}

SentimentProbabilities mock_sentiment(std::string_view text) {
  SentimentProbabilities score = SentimentProbabilities::Constant(0.05);
  const auto& table = lexicon();
  for (const auto& token : tokenize(text)) {
    auto it = table.find(token);
    if (it == table.end()) {
      continue;
    }
    for (const auto& entry : it->second) {
      score[static_cast<Eigen::Index>(index_of(entry.label))] += entry.weight;
    }
  }
  // Rational squashing keeps the result bit-identical across libm versions.
  const SentimentProbabilities base = SentimentProbabilities::Ones() + score;
  return SentimentProbabilities::Ones() - base.cwiseProduct(base).cwiseInverse();
}

std::vector<SentimentProbabilities> MockSentimentProvider::predict(
    std::span<const std::string> texts) const {
  std::vector<SentimentProbabilities> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    out.push_back(mock_sentiment(text));
  }
  return out;
}

MockTranslationProvider::MockTranslationProvider(std::string target_lang)
    : target_lang_(std::move(target_lang)) {}

std::vector<TranslationOutcome> MockTranslationProvider::translate(
    std::span<const std::string> texts) const {
  std::vector<TranslationOutcome> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      out.push_back({std::nullopt, "empty source text"});
    } else {
      out.push_back({"[" + target_lang_ + "] " + text, {}});
    }
  }
  return out;
}

// --- file ------------------------------------------------------------------

namespace {

std::string missing_key(const std::filesystem::path& store, const std::string& text) {
  return "no entry for text \"" + text + "\" in " + store.string();
}

}  // namespace

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& store) {
  bool have_header = false;
  io::for_each_json_line(store, [&](const io::Json& record, std::size_t) {
    if (!have_header) {
      model_id_ = record.at("model_id").get<std::string>();
      dim_ = record.at("dim").get<int>();
      if (dim_ < 1) {
        throw FormatError("dim must be >= 1");
      }
      have_header = true;
      return;
    }
    const auto values = record.at("vector").get<std::vector<double>>();
    if (values.size() != static_cast<std::size_t>(dim_)) {
      throw FormatError("vector length " + std::to_string(values.size()) +
                        " does not match header dim " + std::to_string(dim_));
    }
    entries_[unicode::nfc(record.at("text").get<std::string>())] =
        Eigen::Map<const EmbeddingVector>(values.data(), dim_);
  });
  if (!have_header) {
    throw FormatError(store.string() + ": empty embedding store");
  }
}

std::vector<EmbeddingVector> FileEmbeddingProvider::embed(std::span<const std::string> texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    auto it = entries_.find(unicode::nfc(text));
    if (it == entries_.end()) {
      throw ProviderError(missing_key("embedding store", text));
    }
    out.push_back(it->second);
  }
  return out;
}

void write_embedding_store(const std::filesystem::path& store, const std::string& model_id,
                           std::span<const std::string> texts,
                           std::span<const EmbeddingVector> vectors) {
  if (texts.size() != vectors.size()) {
    throw std::invalid_argument("texts and vectors differ in length");
  }
  const int dim = vectors.empty() ? 1 : static_cast<int>(vectors.front().size());
  io::OrderedJson header;
  header["model_id"] = model_id;
  header["dim"] = dim;
  std::string out = io::dump_line(header) + "\n";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw ValidationError("embedding store rows must share one dimension");
    }
    io::OrderedJson row;
    row["text"] = unicode::nfc(texts[i]);
    row["vector"] = std::vector<double>(vectors[i].data(), vectors[i].data() + dim);
    out += io::dump_line(row) + "\n";
  }
  io::write_file(store, out);
}

FileSentimentProvider::FileSentimentProvider(const std::filesystem::path& store) {
  bool have_header = false;
  io::for_each_json_line(store, [&](const io::Json& record, std::size_t) {
    if (!have_header) {
      model_id_ = record.at("model_id").get<std::string>();
      if (record.at("label_order").get<std::vector<std::string>>() != canonical_label_order()) {
        throw FormatError("label_order differs from the canonical sentiment vocabulary");
      }
      have_header = true;
      return;
    }
    const auto values = record.at("probabilities").get<std::vector<double>>();
    if (values.size() != kNumLabels) {
      throw FormatError("expected " + std::to_string(kNumLabels) + " probabilities, got " +
                        std::to_string(values.size()));
    }
    entries_[unicode::nfc(record.at("text").get<std::string>())] =
        Eigen::Map<const SentimentProbabilities>(values.data());
  });
  if (!have_header) {
    throw FormatError(store.string() + ": empty sentiment store");
  }
}

std::vector<SentimentProbabilities> FileSentimentProvider::predict(
    std::span<const std::string> texts) const {
  std::vector<SentimentProbabilities> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    auto it = entries_.find(unicode::nfc(text));
    if (it == entries_.end()) {
      throw ProviderError(missing_key("sentiment store", text));
    }
    out.push_back(it->second);
  }
  return out;
}

void write_sentiment_store(const std::filesystem::path& store, const std::string& model_id,
                           std::span<const std::string> texts,
                           std::span<const SentimentProbabilities> rows) {
  if (texts.size() != rows.size()) {
    throw std::invalid_argument("texts and rows differ in length");
  }
  io::OrderedJson header;
  header["model_id"] = model_id;
  header["label_order"] = canonical_label_order();
  std::string out = io::dump_line(header) + "\n";
  for (std::size_t i = 0; i < texts.size(); ++i) {
    io::OrderedJson row;
    row["text"] = unicode::nfc(texts[i]);
    row["probabilities"] = std::vector<double>(rows[i].data(), rows[i].data() + kNumLabels);
    out += io::dump_line(row) + "\n";
  }
  io::write_file(store, out);
}

ReplayTranslationProvider::ReplayTranslationProvider(const std::filesystem::path& fixture,
                                                     std::string provider_id)
    : provider_id_(std::move(provider_id)) {
  io::for_each_json_line(fixture, [&](const io::Json& record, std::size_t) {
    entries_[unicode::nfc(record.at("source").get<std::string>())] =
        record.at("translation").get<std::string>();
  });
}

std::vector<TranslationOutcome> ReplayTranslationProvider::translate(
    std::span<const std::string> texts) const {
  std::vector<TranslationOutcome> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    auto it = entries_.find(unicode::nfc(text));
    if (it == entries_.end()) {
      out.push_back({std::nullopt, "no replay entry for source \"" + text + "\""});
    } else if (it->second.empty()) {
      out.push_back({std::nullopt, "replay entry holds an empty translation"});
    } else {
      out.push_back({it->second, {}});
    }
  }
  return out;
}

// --- factories ---------------------------------------------------------------

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const ProviderConfig& config) {
  config.validate();
  switch (config.kind) {
    case ProviderKind::mock:
      return std::make_unique<MockEmbeddingProvider>();
    case ProviderKind::file:
      return std::make_unique<FileEmbeddingProvider>(config.file_path);
    case ProviderKind::http:
      return std::make_unique<HttpEmbeddingProvider>(config);
  }
  throw ValidationError("unsupported embedding provider");
}

std::unique_ptr<SentimentProvider> make_sentiment_provider(const ProviderConfig& config) {
  config.validate();
  switch (config.kind) {
    case ProviderKind::mock:
      return std::make_unique<MockSentimentProvider>();
    case ProviderKind::file:
      return std::make_unique<FileSentimentProvider>(config.file_path);
    case ProviderKind::http:
      return std::make_unique<HttpSentimentProvider>(config);
  }
  throw ValidationError("unsupported sentiment provider");
}

std::unique_ptr<TranslationProvider> make_translation_provider(const ProviderConfig& config,
                                                               const std::string& source_lang,
                                                               const std::string& target_lang) {
  config.validate();
  switch (config.kind) {
    case ProviderKind::mock:
      return std::make_unique<MockTranslationProvider>(target_lang);
    case ProviderKind::file:
      return std::make_unique<ReplayTranslationProvider>(config.file_path);
    case ProviderKind::http:
      return std::make_unique<HttpTranslationProvider>(config, source_lang, target_lang);
  }
  throw ValidationError("unsupported translation provider");
}

}  // namespace verse_eval
