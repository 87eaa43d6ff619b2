#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace verse_eval {

inline constexpr std::size_t kNumLabels = 10;

/// The SenWave sentiment vocabulary in its canonical index order. The
/// "official report" label of the original dataset is not part of it.
enum class SentimentLabel : std::uint8_t {
  optimistic,
  thankful,
  empathetic,
  pessimistic,
  anxious,
  sad,
  annoyed,
  denial,
  surprise,
  joking,
};

inline constexpr std::array<std::string_view, kNumLabels> kLabelNames = {
    "optimistic", "thankful", "empathetic", "pessimistic", "anxious",
    "sad",        "annoyed",  "denial",     "surprise",    "joking",
};

std::string_view label_name(SentimentLabel label);
/// Throws verse_eval::Error for names outside the vocabulary.
SentimentLabel parse_label(std::string_view name);
std::vector<std::string> canonical_label_order();

inline std::size_t index_of(SentimentLabel label) { return static_cast<std::size_t>(label); }

/// Independent per-label probabilities (multi-label, not a softmax).
template <typename Scalar>
using ProbabilitiesT = Eigen::Matrix<Scalar, static_cast<int>(kNumLabels), 1>;
using SentimentProbabilities = ProbabilitiesT<double>;

/// A subset of the vocabulary; may be empty.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<SentimentLabel> labels) {
    for (auto label : labels) {
      insert(label);
    }
  }
  static LabelSet from_bits(std::bitset<kNumLabels> bits) {
    LabelSet out;
    out.bits_ = bits;
    return out;
  }

  void insert(SentimentLabel label) { bits_.set(index_of(label)); }
  bool contains(SentimentLabel label) const { return bits_.test(index_of(label)); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  const std::bitset<kNumLabels>& bits() const { return bits_; }

  /// Names in canonical order.
  std::vector<std::string> names() const;

  friend LabelSet operator&(const LabelSet& a, const LabelSet& b) { return from_bits(a.bits_ & b.bits_); }
  friend LabelSet operator|(const LabelSet& a, const LabelSet& b) { return from_bits(a.bits_ | b.bits_); }
  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::bitset<kNumLabels> bits_;
};

}  // namespace verse_eval
