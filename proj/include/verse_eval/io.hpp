#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "verse_eval/common.hpp"

// File and text-format plumbing shared by the corpus, provider and report
// modules. All writers emit LF line endings and locale-independent numbers.
namespace verse_eval::io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);

/// Writes bytes verbatim, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Calls `visit(record, line_number)` for each non-blank line. Parse errors
/// are raised as FormatError carrying `path:line`.
void for_each_json_line(const std::filesystem::path& path,
                        const std::function<void(const Json&, std::size_t)>& visit);

/// Compact single-line JSON with UTF-8 kept verbatim.
std::string dump_line(const OrderedJson& value);
std::string dump_pretty(const OrderedJson& value);

std::string csv_field(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

/// Fixed-point rendering with a period separator regardless of locale.
std::string format_fixed(double value, int decimals);
/// Shortest round-trip rendering.
std::string format_shortest(double value);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace verse_eval::io
