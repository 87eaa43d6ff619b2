#include "verse_eval/labels.hpp"

#include "verse_eval/common.hpp"

namespace verse_eval {

std::string_view label_name(SentimentLabel label) { return kLabelNames.at(index_of(label)); }

SentimentLabel parse_label(std::string_view name) {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kLabelNames[i] == name) {
      return static_cast<SentimentLabel>(i);
    }
  }
  throw Error("unknown sentiment label '" + std::string(name) + "'");
}

std::vector<std::string> canonical_label_order() {
  return {kLabelNames.begin(), kLabelNames.end()};
}

std::vector<std::string> LabelSet::names() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (bits_.test(i)) {
      out.emplace_back(kLabelNames[i]);
    }
  }
  return out;
}

}  // namespace verse_eval
