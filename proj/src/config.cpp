#include "verse_eval/config.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "verse_eval/io.hpp"

namespace verse_eval {
namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t number) : text_(line), number_(number) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw FormatError("config line " + std::to_string(number_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string bare_key() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '_' || c == '-' || c == '.';
      if (!ok) {
        break;
      }
      ++pos_;
    }
    if (pos_ == start) {
      fail("expected a key");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  ConfigFile::Value value() {
    skip_space();
    if (consume('[')) {
      std::vector<ConfigFile::Scalar> items;
      if (consume(']')) {
        return items;
      }
      while (true) {
        items.push_back(scalar());
        if (consume(']')) {
          break;
        }
        if (!consume(',')) {
          fail("expected ',' or ']' in array");
        }
        if (consume(']')) {
          break;  // trailing comma
        }
      }
      return items;
    }
    return std::visit([](auto&& v) -> ConfigFile::Value { return v; }, scalar());
  }

 private:
  ConfigFile::Scalar scalar() {
    skip_space();
    if (pos_ >= text_.size()) {
      fail("missing value");
    }
    const char c = text_[pos_];
    if (c == '"') {
      return basic_string();
    }
    if (c == '\'') {
      const std::size_t close = text_.find('\'', pos_ + 1);
      if (close == std::string_view::npos) {
        fail("unterminated string");
      }
      std::string out(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return out;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
           text_[pos_] != '#' && text_[pos_] != ' ' && text_[pos_] != '\t') {
      ++pos_;
    }
    const std::string_view word = text_.substr(start, pos_ - start);
    if (word == "true") return true;
    if (word == "false") return false;
    double number = 0.0;
    const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), number);
    if (word.empty() || ec != std::errc() || end != word.data() + word.size() ||
        !std::isfinite(number)) {
      fail("unrecognized value '" + std::string(word) + "'");
    }
    return number;
  }

  std::string basic_string() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') {
        return out;
      }
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) {
        break;
      }
      const char e = text_[pos_++];
      switch (e) {
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        case '"':
          out += '"';
          break;
        case '\\':
          out += '\\';
          break;
        default:
          fail(std::string("unsupported escape \\") + e);
      }
    }
    fail("unterminated string");
  }

  std::string_view text_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

std::string describe(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::filesystem::path base_dir) {
  ConfigFile config;
  config.base_dir_ = std::move(base_dir);
  std::string section;
  config.sections_[section];
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    LineParser parser(line, number);
    if (parser.at_end()) {
      continue;
    }
    if (parser.consume('[')) {
      section = parser.bare_key();
      if (!parser.consume(']')) {
        parser.fail("expected ']' after section name");
      }
      if (!parser.at_end()) {
        parser.fail("trailing characters after section header");
      }
      config.sections_[section];
      continue;
    }
    const std::string key = parser.bare_key();
    if (!parser.consume('=')) {
      parser.fail("expected '=' after key '" + key + "'");
    }
    Value value = parser.value();
    if (!parser.at_end()) {
      parser.fail("trailing characters after value of '" + key + "'");
    }
    if (!config.sections_[section].emplace(key, std::move(value)).second) {
      parser.fail("duplicate key " + describe(section, key));
    }
  }
  return config;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  const std::string text = io::read_file(path);
  try {
    return parse(text, path.parent_path());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

const ConfigFile::Value* ConfigFile::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) {
    return nullptr;
  }
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::set<std::string> ConfigFile::sections() const {
  std::set<std::string> out;
  for (const auto& [name, keys] : sections_) {
    if (!name.empty() || !keys.empty()) {
      out.insert(name);
    }
  }
  return out;
}

std::set<std::string> ConfigFile::keys(const std::string& section) const {
  std::set<std::string> out;
  auto s = sections_.find(section);
  if (s != sections_.end()) {
    for (const auto& [key, value] : s->second) {
      out.insert(key);
    }
  }
  return out;
}

std::optional<std::string> ConfigFile::get_string(const std::string& section,
                                                  const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw FormatError(describe(section, key) + " must be a string");
}

std::optional<double> ConfigFile::get_number(const std::string& section,
                                             const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) return std::nullopt;
  if (const auto* d = std::get_if<double>(v)) return *d;
  throw FormatError(describe(section, key) + " must be a number");
}

std::optional<std::int64_t> ConfigFile::get_integer(const std::string& section,
                                                    const std::string& key) const {
  const auto number = get_number(section, key);
  if (!number) return std::nullopt;
  if (*number != std::trunc(*number) || std::fabs(*number) > 9.0e15) {
    throw FormatError(describe(section, key) + " must be an integer");
  }
  return static_cast<std::int64_t>(*number);
}

std::optional<bool> ConfigFile::get_bool(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) return std::nullopt;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  throw FormatError(describe(section, key) + " must be true or false");
}

std::optional<std::vector<std::string>> ConfigFile::get_strings(const std::string& section,
                                                                const std::string& key) const {
  const Value* v = find(section, key);
  if (v == nullptr) return std::nullopt;
  const auto* items = std::get_if<std::vector<Scalar>>(v);
  if (items == nullptr) {
    throw FormatError(describe(section, key) + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& item : *items) {
    const auto* s = std::get_if<std::string>(&item);
    if (s == nullptr) {
      throw FormatError(describe(section, key) + " must be an array of strings");
    }
    out.push_back(*s);
  }
  return out;
}

std::optional<std::filesystem::path> ConfigFile::get_path(const std::string& section,
                                                          const std::string& key) const {
  const auto text = get_string(section, key);
  if (!text) return std::nullopt;
  std::filesystem::path path(*text);
  if (path.is_relative() && !base_dir_.empty()) {
    path = base_dir_ / path;
  }
  return path.lexically_normal();
}

void ConfigFile::require_known(const std::map<std::string, std::set<std::string>>& allowed) const {
  for (const auto& [section, entries] : sections_) {
    if (section.empty() && entries.empty()) {
      continue;
    }
    auto s = allowed.find(section);
    if (s == allowed.end()) {
      throw FormatError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : entries) {
      if (s->second.count(key) == 0) {
        throw FormatError("unknown config key " + describe(section, key));
      }
    }
  }
}

std::vector<int> parse_chapter_selection(std::string_view text) {
  auto fail = [&] {
    return ValidationError("invalid chapter selection '" + std::string(text) +
                           "' (expected e.g. 3,5,7-12)");
  };
  auto number = [&](std::string_view part) {
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    int value = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size() || value < 1) {
      throw fail();
    }
    return value;
  };
  std::set<int> chapters;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) {
      comma = text.size();
    }
    const std::string_view item = text.substr(pos, comma - pos);
    pos = comma + 1;
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) {
      chapters.insert(number(item));
    } else {
      const int lo = number(item.substr(0, dash));
      const int hi = number(item.substr(dash + 1));
      if (lo > hi) {
        throw fail();
      }
      for (int c = lo; c <= hi; ++c) {
        chapters.insert(c);
      }
    }
  }
  return {chapters.begin(), chapters.end()};
}

}  // namespace verse_eval
