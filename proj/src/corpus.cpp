#include "verse_eval/corpus.hpp"

#include <algorithm>

#include "verse_eval/io.hpp"

namespace verse_eval {

namespace fs = std::filesystem;

std::string to_string(const VerseRef& ref) {
  return "(" + std::to_string(ref.chapter) + "," + std::to_string(ref.verse) + ")";
}

Verse make_verse(VerseRef ref, std::string raw_text, std::optional<std::string> source_text) {
  Verse verse;
  verse.ref = ref;
  verse.clean_text = clean_verse(raw_text);
  verse.raw_text = std::move(raw_text);
  verse.source_text = std::move(source_text);
  return verse;
}

TranslationCorpus::TranslationCorpus(std::string id, std::string title, std::string translator,
                                     std::string language, std::string source)
    : id_(std::move(id)),
      title_(std::move(title)),
      translator_(std::move(translator)),
      language_(std::move(language)),
      source_(std::move(source)) {
  if (!is_valid_corpus_id(id_)) {
    throw ValidationError("invalid corpus id '" + id_ + "'");
  }
}

void TranslationCorpus::add(Verse verse) {
  if (verse.ref.chapter < 1 || verse.ref.verse < 1) {
    throw ValidationError("corpus " + id_ + ": verse ref " + to_string(verse.ref) +
                          " must have positive chapter and verse");
  }
  if (verse.raw_text.empty()) {
    throw ValidationError("corpus " + id_ + ": empty text at " + to_string(verse.ref));
  }
  const VerseRef ref = verse.ref;
  auto [it, inserted] = verses_.emplace(ref, std::move(verse));
  if (!inserted) {
    throw ValidationError("corpus " + id_ + ": duplicate verse ref " + to_string(ref));
  }
}

const Verse* TranslationCorpus::find(const VerseRef& ref) const {
  auto it = verses_.find(ref);
  return it == verses_.end() ? nullptr : &it->second;
}

std::set<int> TranslationCorpus::chapters() const {
  std::set<int> out;
  for (const auto& [ref, verse] : verses_) {
    out.insert(ref.chapter);
  }
  return out;
}

void CorpusSet::add(TranslationCorpus corpus) {
  const std::string id = corpus.id();
  if (!corpora_.emplace(id, std::move(corpus)).second) {
    throw ValidationError("duplicate corpus id '" + id + "'");
  }
}

const TranslationCorpus& CorpusSet::at(const std::string& id) const {
  auto it = corpora_.find(id);
  if (it == corpora_.end()) {
    throw Error("unknown corpus id '" + id + "'");
  }
  return it->second;
}

std::vector<std::string> CorpusSet::ids() const {
  std::vector<std::string> out;
  out.reserve(corpora_.size());
  for (const auto& [id, corpus] : corpora_) {
    out.push_back(id);
  }
  return out;
}

bool is_valid_corpus_id(std::string_view id) {
  if (id.empty() || id == "." || id == "..") {
    return false;
  }
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '/' || c == '\\';
  });
}

namespace {

std::string required_string(const io::Json& object, const char* key, const fs::path& file) {
  if (!object.contains(key) || !object.at(key).is_string()) {
    throw FormatError(file.string() + ": missing string field '" + key + "'");
  }
  return object.at(key).get<std::string>();
}

int required_positive_int(const io::Json& record, const char* key) {
  if (!record.contains(key) || !record.at(key).is_number_integer()) {
    throw FormatError(std::string("missing integer field '") + key + "'");
  }
  const auto value = record.at(key).get<long long>();
  if (value < 1 || value > 1'000'000) {
    throw FormatError(std::string("field '") + key + "' out of range");
  }
  return static_cast<int>(value);
}

}  // namespace

TranslationCorpus load_corpus(const fs::path& directory) {
  const fs::path manifest_path = directory / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw FormatError("missing manifest: " + manifest_path.string());
  }
  io::Json manifest;
  try {
    manifest = io::Json::parse(io::read_file(manifest_path));
  } catch (const io::Json::parse_error& e) {
    throw FormatError(manifest_path.string() + ": malformed JSON: " + e.what());
  }
  if (!manifest.is_object()) {
    throw FormatError(manifest_path.string() + ": manifest must be a JSON object");
  }
  std::string source;
  if (manifest.contains("source") && manifest.at("source").is_string()) {
    source = manifest.at("source").get<std::string>();
  }
  TranslationCorpus corpus(required_string(manifest, "id", manifest_path),
                           required_string(manifest, "title", manifest_path),
                           required_string(manifest, "translator", manifest_path),
                           required_string(manifest, "language", manifest_path), source);

  const fs::path verses_path = directory / "verses.jsonl";
  if (!fs::exists(verses_path)) {
    throw FormatError("missing verses file: " + verses_path.string());
  }
  io::for_each_json_line(verses_path, [&](const io::Json& record, std::size_t) {
    if (!record.is_object()) {
      throw FormatError("record must be a JSON object");
    }
    const VerseRef ref{required_positive_int(record, "chapter"),
                       required_positive_int(record, "verse")};
    if (!record.contains("text") || !record.at("text").is_string()) {
      throw FormatError("missing string field 'text' at " + to_string(ref));
    }
    std::string text = record.at("text").get<std::string>();
    if (text.empty()) {
      throw FormatError("empty text field at " + to_string(ref));
    }
    std::optional<std::string> original;
    if (record.contains("original") && record.at("original").is_string()) {
      original = record.at("original").get<std::string>();
    }
    if (corpus.contains(ref)) {
      throw FormatError("duplicate verse ref " + to_string(ref));
    }
    corpus.add(make_verse(ref, std::move(text), std::move(original)));
  });
  return corpus;
}

void save_corpus(const TranslationCorpus& corpus, const fs::path& directory) {
  io::OrderedJson manifest;
  manifest["id"] = corpus.id();
  manifest["title"] = corpus.title();
  manifest["translator"] = corpus.translator();
  manifest["language"] = corpus.language();
  manifest["source"] = corpus.source();
  io::write_file(directory / "manifest.json", io::dump_pretty(manifest));

  std::string lines;
  for (const auto& [ref, verse] : corpus.verses()) {
    io::OrderedJson record;
    record["chapter"] = ref.chapter;
    record["verse"] = ref.verse;
    record["text"] = verse.raw_text;
    if (verse.source_text) {
      record["original"] = *verse.source_text;
    }
    lines += io::dump_line(record);
    lines += '\n';
  }
  io::write_file(directory / "verses.jsonl", lines);
}

CorpusSet load_corpus_set(const fs::path& root) {
  if (!fs::is_directory(root)) {
    throw Error("corpus root is not a directory: " + root.string());
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  CorpusSet set;
  for (const auto& dir : dirs) {
    set.add(load_corpus(dir));
  }
  return set;
}

Alignment align(const TranslationCorpus& left, const TranslationCorpus& right) {
  Alignment out;
  auto l = left.verses().begin();
  auto r = right.verses().begin();
  const auto l_end = left.verses().end();
  const auto r_end = right.verses().end();
  auto unmatched = [&out](const VerseRef& ref, const TranslationCorpus& has,
                          const TranslationCorpus& lacks) {
    out.warnings.push_back({ref, "verse " + to_string(ref) + " present in '" + has.id() +
                                     "' but missing from '" + lacks.id() + "'"});
  };
  while (l != l_end || r != r_end) {
    if (r == r_end || (l != l_end && l->first < r->first)) {
      unmatched(l->first, left, right);
      ++l;
    } else if (l == l_end || r->first < l->first) {
      unmatched(r->first, right, left);
      ++r;
    } else {
      out.pairs.push_back({l->first, &l->second, &r->second});
      ++l;
      ++r;
    }
  }
  return out;
}

std::vector<Verse> chapter_slice(const TranslationCorpus& corpus, int chapter) {
  std::vector<Verse> out;
  auto it = corpus.verses().lower_bound(VerseRef{chapter, 0});
  for (; it != corpus.verses().end() && it->first.chapter == chapter; ++it) {
    out.push_back(it->second);
  }
  return out;
}

}  // namespace verse_eval
