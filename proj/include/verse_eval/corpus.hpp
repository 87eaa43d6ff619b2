#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "verse_eval/common.hpp"

namespace verse_eval {

struct Verse {
  VerseRef ref;
  std::string raw_text;
  std::string clean_text;
  /// Original-language text carried alongside a machine translation.
  std::optional<std::string> source_text;
};

/// Builds a verse, deriving clean_text from raw_text.
Verse make_verse(VerseRef ref, std::string raw_text,
                 std::optional<std::string> source_text = std::nullopt);

/// One translator's complete verse collection. Immutable once built and
/// shared read-only between workers.
class TranslationCorpus {
 public:
  TranslationCorpus() = default;
  TranslationCorpus(std::string id, std::string title, std::string translator,
                    std::string language, std::string source = {});

  const std::string& id() const { return id_; }
  const std::string& title() const { return title_; }
  const std::string& translator() const { return translator_; }
  const std::string& language() const { return language_; }
  const std::string& source() const { return source_; }

  /// Throws ValidationError on a duplicate ref or an empty raw text.
  void add(Verse verse);

  const Verse* find(const VerseRef& ref) const;
  bool contains(const VerseRef& ref) const { return verses_.count(ref) != 0; }
  std::size_t size() const { return verses_.size(); }
  bool empty() const { return verses_.empty(); }
  std::set<int> chapters() const;

  const std::map<VerseRef, Verse>& verses() const { return verses_; }

 private:
  std::string id_;
  std::string title_;
  std::string translator_;
  std::string language_;
  std::string source_;
  std::map<VerseRef, Verse> verses_;
};

/// Corpora keyed by exact (case-sensitive) id.
class CorpusSet {
 public:
  void add(TranslationCorpus corpus);
  const TranslationCorpus& at(const std::string& id) const;
  bool contains(const std::string& id) const { return corpora_.count(id) != 0; }
  std::vector<std::string> ids() const;
  std::size_t size() const { return corpora_.size(); }

 private:
  std::map<std::string, TranslationCorpus> corpora_;
};

/// Corpus ids are non-empty tokens without whitespace or path separators.
bool is_valid_corpus_id(std::string_view id);

/// Normalizes one verse: NFC, verse-numbering removal, single line,
/// character filtering, whitespace collapse and trim. Total and idempotent.
std::string clean_verse(std::string_view raw);

/// Reads `manifest.json` and `verses.jsonl` from a corpus directory.
TranslationCorpus load_corpus(const std::filesystem::path& directory);

/// Writes the corpus back in the same layout; raw text is written byte-exact.
void save_corpus(const TranslationCorpus& corpus, const std::filesystem::path& directory);

/// Loads every immediate subdirectory of `root` that holds a manifest.
CorpusSet load_corpus_set(const std::filesystem::path& root);

struct AlignedVerse {
  VerseRef ref;
  const Verse* left = nullptr;
  const Verse* right = nullptr;
};

struct Alignment {
  std::vector<AlignedVerse> pairs;
  Warnings warnings;
};

/// Pairs the refs present in both corpora, sorted by ref. Each ref present in
/// only one corpus yields a warning. The result points into both corpora.
Alignment align(const TranslationCorpus& left, const TranslationCorpus& right);

/// Verses of one chapter sorted by verse number; empty when absent.
std::vector<Verse> chapter_slice(const TranslationCorpus& corpus, int chapter);

}  // namespace verse_eval
