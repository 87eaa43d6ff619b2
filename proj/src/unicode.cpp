#include "verse_eval/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "verse_eval/common.hpp"

namespace verse_eval::unicode {

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error("ICU NFC normalizer unavailable: " + std::string(u_errorName(status)));
  }
  // Round-trip through encode/decode so malformed bytes become U+FFFD deterministically.
  const std::string sanitized = encode(decode(utf8));
  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(sanitized);
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) {
    return sanitized;
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error("NFC normalization failed: " + std::string(u_errorName(status)));
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string to_lower(std::string_view utf8) {
  std::u32string cps = decode(utf8);
  for (char32_t& c : cps) {
    c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  }
  return encode(cps);
}

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) {
      c = U'\uFFFD';
    }
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    (void)error;  // cannot fail: the buffer fits any code point
    out.append(reinterpret_cast<const char*>(buf), static_cast<size_t>(n));
  }
  return out;
}

bool is_letter(char32_t c) {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK)) != 0;
}

bool is_digit(char32_t c) {
  return u_charType(static_cast<UChar32>(c)) == U_DECIMAL_DIGIT_NUMBER;
}

bool is_space(char32_t c) {
  return u_hasBinaryProperty(static_cast<UChar32>(c), UCHAR_WHITE_SPACE) != 0;
}

}  // namespace verse_eval::unicode
