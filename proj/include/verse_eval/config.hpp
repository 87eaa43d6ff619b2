#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "verse_eval/common.hpp"

namespace verse_eval {

/// A TOML-style file: `[section]` headers and `key = value` lines where a
/// value is a quoted string, a number, true/false or a one-line array of
/// those. `#` starts a comment outside strings.
class ConfigFile {
 public:
  using Scalar = std::variant<std::string, double, bool>;
  using Value = std::variant<std::string, double, bool, std::vector<Scalar>>;

  /// Throws FormatError carrying the line number.
  static ConfigFile parse(std::string_view text, std::filesystem::path base_dir = {});
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::set<std::string> sections() const;
  std::set<std::string> keys(const std::string& section) const;

  // Typed accessors return nullopt when absent and throw FormatError when the
  // value has another type.
  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<double> get_number(const std::string& section, const std::string& key) const;
  std::optional<std::int64_t> get_integer(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::optional<std::vector<std::string>> get_strings(const std::string& section,
                                                      const std::string& key) const;
  /// A string value resolved against the directory of the config file.
  std::optional<std::filesystem::path> get_path(const std::string& section,
                                                const std::string& key) const;

  /// Throws FormatError naming the first section or key outside `allowed`.
  void require_known(const std::map<std::string, std::set<std::string>>& allowed) const;

 private:
  const Value* find(const std::string& section, const std::string& key) const;

  std::filesystem::path base_dir_;
  std::map<std::string, std::map<std::string, Value>> sections_;
};

/// "3,5,7-12,15-17" -> {3,5,7,...,12,15,16,17}, sorted and deduplicated.
/// Throws ValidationError on malformed input or a chapter below 1.
std::vector<int> parse_chapter_selection(std::string_view text);

}  // namespace verse_eval
