#pragma once

#include <string>
#include <string_view>

// Thin UTF-8 helpers over ICU. Malformed input sequences decode as U+FFFD.
namespace verse_eval::unicode {

std::string nfc(std::string_view utf8);

/// Simple (per code point) lowercase mapping; locale independent.
std::string to_lower(std::string_view utf8);

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);

/// Letters and combining marks (general categories L* and M*).
bool is_letter(char32_t c);
/// Decimal digits of any script (Nd), including Devanagari digits.
bool is_digit(char32_t c);
/// Unicode White_Space property.
bool is_space(char32_t c);

}  // namespace verse_eval::unicode
