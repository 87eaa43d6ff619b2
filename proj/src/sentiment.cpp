#include "verse_eval/sentiment.hpp"

#include <cmath>
#include <set>

#include "verse_eval/io.hpp"

namespace verse_eval {
namespace {

void require_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1), got " +
                                io::format_shortest(threshold));
  }
}

void require_probabilities(const SentimentProbabilities& p, const std::string& where) {
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError("probability for '" +
                            std::string(kLabelNames[static_cast<std::size_t>(i)]) + "' at " +
                            where + " is outside [0,1]: " + io::format_shortest(v));
    }
  }
}

template <typename Map>
auto chapter_range(const Map& map, int chapter) {
  return std::make_pair(map.lower_bound(VerseRef{chapter, 0}),
                        map.lower_bound(VerseRef{chapter + 1, 0}));
}

}  // namespace

LabelSet binarize(const SentimentProbabilities& probabilities, double threshold) {
  require_threshold(threshold);
  std::bitset<kNumLabels> bits;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    bits.set(i, probabilities[static_cast<Eigen::Index>(i)] >= threshold);
  }
  return LabelSet::from_bits(bits);
}

double jaccard(const LabelSet& a, const LabelSet& b) {
  const std::size_t united = (a | b).size();
  if (united == 0) {
    return 1.0;
  }
  return static_cast<double>((a & b).size()) / static_cast<double>(united);
}

SentimentPredictions::SentimentPredictions(std::string corpus_id, double threshold)
    : corpus_id_(std::move(corpus_id)), threshold_(threshold) {
  require_threshold(threshold);
}

void SentimentPredictions::add(const VerseRef& ref, const SentimentProbabilities& probabilities) {
  require_probabilities(probabilities, corpus_id_ + " " + to_string(ref));
  VersePrediction prediction{probabilities, binarize(probabilities, threshold_)};
  if (!per_verse_.emplace(ref, std::move(prediction)).second) {
    throw ValidationError("duplicate prediction for " + to_string(ref) + " in '" + corpus_id_ +
                          "'");
  }
}

const VersePrediction* SentimentPredictions::find(const VerseRef& ref) const {
  auto it = per_verse_.find(ref);
  return it == per_verse_.end() ? nullptr : &it->second;
}

std::vector<int> SentimentPredictions::chapters() const {
  std::set<int> seen;
  for (const auto& [ref, prediction] : per_verse_) {
    seen.insert(ref.chapter);
  }
  return {seen.begin(), seen.end()};
}

ChapterJaccard chapter_jaccard(const SentimentPredictions& a, const SentimentPredictions& b,
                               int chapter, EmptyPairPolicy policy) {
  ChapterJaccard out;
  out.chapter = chapter;
  double sum = 0.0;
  auto [it, end] = chapter_range(a.per_verse(), chapter);
  for (; it != end; ++it) {
    const VersePrediction* other = b.find(it->first);
    if (other == nullptr) {
      continue;
    }
    const LabelSet& left = it->second.labels;
    const LabelSet& right = other->labels;
    if (policy == EmptyPairPolicy::skip && left.empty() && right.empty()) {
      continue;
    }
    sum += jaccard(left, right);
    ++out.verses;
  }
  if (out.verses == 0) {
    throw Error("no common verses in chapter " + std::to_string(chapter) + " between '" +
                a.corpus_id() + "' and '" + b.corpus_id() + "'");
  }
  out.mean = sum / static_cast<double>(out.verses);
  return out;
}

namespace {

template <typename Visit>
void for_each_prediction(const SentimentPredictions& predictions, std::optional<int> chapter,
                         Visit&& visit) {
  if (chapter) {
    auto [it, end] = chapter_range(predictions.per_verse(), *chapter);
    for (; it != end; ++it) {
      visit(it->second);
    }
  } else {
    for (const auto& [ref, prediction] : predictions.per_verse()) {
      visit(prediction);
    }
  }
}

LabelCounts indicator(const LabelSet& labels) {
  LabelCounts x;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    x[static_cast<Eigen::Index>(i)] = labels.bits().test(i) ? 1 : 0;
  }
  return x;
}

}  // namespace

LabelCounts cumulative_counts(const SentimentPredictions& predictions, std::optional<int> chapter) {
  LabelCounts counts = LabelCounts::Zero();
  for_each_prediction(predictions, chapter,
                      [&](const VersePrediction& p) { counts += indicator(p.labels); });
  return counts;
}

CooccurrenceMatrix cooccurrence(const SentimentPredictions& predictions, std::optional<int> chapter) {
  CooccurrenceMatrix m = CooccurrenceMatrix::Zero();
  for_each_prediction(predictions, chapter, [&](const VersePrediction& p) {
    const LabelCounts x = indicator(p.labels);
    m.noalias() += x * x.transpose();
  });
  return m;
}

SentimentPredictions predict_corpus(const SentimentProvider& provider,
                                    const TranslationCorpus& corpus, double threshold,
                                    std::size_t batch_size) {
  if (batch_size == 0) {
    throw std::invalid_argument("batch_size must be >= 1");
  }
  SentimentPredictions out(corpus.id(), threshold);
  std::vector<VerseRef> refs;
  std::vector<std::string> texts;
  refs.reserve(corpus.size());
  texts.reserve(corpus.size());
  for (const auto& [ref, verse] : corpus.verses()) {
    refs.push_back(ref);
    texts.push_back(verse.clean_text);
  }
  for (std::size_t begin = 0; begin < texts.size(); begin += batch_size) {
    const std::size_t count = std::min(batch_size, texts.size() - begin);
    const std::span<const std::string> batch(texts.data() + begin, count);
    const std::vector<SentimentProbabilities> rows = provider.predict(batch);
    if (rows.size() != count) {
      throw ProviderError("sentiment provider returned " + std::to_string(rows.size()) +
                          " rows for " + std::to_string(count) + " texts");
    }
    for (std::size_t i = 0; i < count; ++i) {
      out.add(refs[begin + i], rows[i]);
    }
  }
  return out;
}

std::string predictions_to_jsonl(const SentimentPredictions& predictions) {
  io::OrderedJson header;
  header["corpus_id"] = predictions.corpus_id();
  header["threshold"] = predictions.threshold();
  header["label_order"] = canonical_label_order();
  std::string out = io::dump_line(header) + "\n";
  for (const auto& [ref, prediction] : predictions.per_verse()) {
    io::OrderedJson record;
    record["chapter"] = ref.chapter;
    record["verse"] = ref.verse;
    std::vector<double> probabilities(prediction.probabilities.data(),
                                      prediction.probabilities.data() + kNumLabels);
    record["probabilities"] = probabilities;
    record["labels"] = prediction.labels.names();
    out += io::dump_line(record);
    out += '\n';
  }
  return out;
}

void save_predictions(const SentimentPredictions& predictions, const std::filesystem::path& path) {
  io::write_file(path, predictions_to_jsonl(predictions));
}

SentimentPredictions load_predictions(const std::filesystem::path& path) {
  std::optional<SentimentPredictions> out;
  io::for_each_json_line(path, [&](const io::Json& record, std::size_t) {
    if (!out) {
      if (!record.contains("corpus_id") || !record.contains("threshold") ||
          !record.contains("label_order")) {
        throw FormatError("predictions header must carry corpus_id, threshold, label_order");
      }
      if (record.at("label_order").get<std::vector<std::string>>() != canonical_label_order()) {
        throw FormatError("label_order differs from the canonical sentiment vocabulary");
      }
      const double threshold = record.at("threshold").get<double>();
      if (!(threshold > 0.0 && threshold < 1.0)) {
        throw FormatError("threshold must lie in (0, 1)");
      }
      out.emplace(record.at("corpus_id").get<std::string>(), threshold);
      return;
    }
    const VerseRef ref{record.at("chapter").get<int>(), record.at("verse").get<int>()};
    const auto values = record.at("probabilities").get<std::vector<double>>();
    if (values.size() != kNumLabels) {
      throw FormatError("expected " + std::to_string(kNumLabels) + " probabilities at " +
                        to_string(ref));
    }
    SentimentProbabilities probabilities;
    for (std::size_t i = 0; i < kNumLabels; ++i) {
      probabilities[static_cast<Eigen::Index>(i)] = values[i];
    }
    LabelSet stored;
    for (const auto& name : record.at("labels").get<std::vector<std::string>>()) {
      try {
        stored.insert(parse_label(name));
      } catch (const Error& e) {
        throw FormatError(e.what());
      }
    }
    try {
      out->add(ref, probabilities);
    } catch (const ValidationError& e) {
      throw FormatError(e.what());
    }
    if (out->find(ref)->labels != stored) {
      throw FormatError("labels at " + to_string(ref) +
                        " disagree with the thresholded probabilities");
    }
  });
  if (!out) {
    throw FormatError(path.string() + ": empty predictions file");
  }
  return std::move(*out);
}

}  // namespace verse_eval
