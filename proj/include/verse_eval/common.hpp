#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace verse_eval {

/// (chapter, verse) coordinate addressing one verse across every translation.
struct VerseRef {
  int chapter = 0;
  int verse = 0;

  friend auto operator<=>(const VerseRef&, const VerseRef&) = default;
};

std::string to_string(const VerseRef& ref);

inline std::ostream& operator<<(std::ostream& os, const VerseRef& ref) {
  return os << to_string(ref);
}

/// Non-fatal diagnostic produced by an operation that skips input
/// (unmatched verses, failed translations, missing predictions).
struct Warning {
  std::optional<VerseRef> ref;
  std::string message;
};

using Warnings = std::vector<Warning>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Violated data invariant (duplicate refs, out-of-range values, drifted dims).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A provider (translation, embedding, sentiment) failed unrecoverably.
class ProviderError : public Error {
 public:
  using Error::Error;
};

}  // namespace verse_eval
