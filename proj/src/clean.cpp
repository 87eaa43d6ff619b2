#include <memory>
#include <string>
#include <string_view>

#include <unicode/regex.h>
#include <unicode/unistr.h>

#include "verse_eval/corpus.hpp"
#include "verse_eval/unicode.hpp"

namespace verse_eval {
namespace {

// Separators that may sit between the chapter and verse digits, and the
// danda/pipe markers that may enclose a verse number.
constexpr std::u16string_view kNumberSeparator = u"(?:\\.|-|–|\\|\\||।।|॥)";
constexpr std::u16string_view kNumberMarker = u"(?:\\|\\||।।|॥|।)";

icu::UnicodeString ustr(std::u16string_view s) {
  return icu::UnicodeString(s.data(), static_cast<int32_t>(s.size()));
}

class Patterns {
 public:
  Patterns() {
    const icu::UnicodeString sep = ustr(kNumberSeparator);
    const icu::UnicodeString marker = ustr(kNumberMarker);
    const icu::UnicodeString number =
        icu::UnicodeString(u"\\p{Nd}+(?:\\s*") + sep + u"\\s*\\p{Nd}+)?";
    wrapped_ = compile(marker + u"\\s*" + number + u"\\s*" + marker);
    pair_ = compile(icu::UnicodeString(u"\\p{Nd}+") + sep + u"\\p{Nd}+");
    leading_ = compile(
        u"^\\s*(?:\\p{Nd}+[.:)]?\\s+)*\\p{Nd}+[.:)]?(?![\\p{L}\\p{M}\\p{Nd}])");
    trailing_ = compile(u"(?<![\\p{L}\\p{M}\\p{Nd}])\\p{Nd}+(?:\\s+\\p{Nd}+)*\\s*$");
    line_break_ = compile(u"\\R");
    whitespace_ = compile(u"\\s+");
  }

  const icu::RegexPattern& wrapped() const { return *wrapped_; }
  const icu::RegexPattern& pair() const { return *pair_; }
  const icu::RegexPattern& leading() const { return *leading_; }
  const icu::RegexPattern& trailing() const { return *trailing_; }
  const icu::RegexPattern& line_break() const { return *line_break_; }
  const icu::RegexPattern& whitespace() const { return *whitespace_; }

 private:
  static std::unique_ptr<icu::RegexPattern> compile(const icu::UnicodeString& pattern) {
    UParseError parse_error;
    UErrorCode status = U_ZERO_ERROR;
    std::unique_ptr<icu::RegexPattern> compiled(
        icu::RegexPattern::compile(pattern, 0, parse_error, status));
    if (U_FAILURE(status)) {
      throw Error("invalid cleaning pattern: " + std::string(u_errorName(status)));
    }
    return compiled;
  }

  std::unique_ptr<icu::RegexPattern> wrapped_;
  std::unique_ptr<icu::RegexPattern> pair_;
  std::unique_ptr<icu::RegexPattern> leading_;
  std::unique_ptr<icu::RegexPattern> trailing_;
  std::unique_ptr<icu::RegexPattern> line_break_;
  std::unique_ptr<icu::RegexPattern> whitespace_;
};

const Patterns& patterns() {
  static const Patterns instance;
  return instance;
}

icu::UnicodeString replace_all(const icu::RegexPattern& pattern, const icu::UnicodeString& input,
                               const icu::UnicodeString& replacement) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> matcher(pattern.matcher(input, status));
  if (U_FAILURE(status)) {
    throw Error("regex matcher failed: " + std::string(u_errorName(status)));
  }
  icu::UnicodeString out = matcher->replaceAll(replacement, status);
  if (U_FAILURE(status)) {
    throw Error("regex replace failed: " + std::string(u_errorName(status)));
  }
  return out;
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’' || c == U'ʼ'; }
bool is_hyphen(char32_t c) { return c == U'-' || c == U'‐' || c == U'‑'; }

bool is_sentence_punctuation(char32_t c) {
  switch (c) {
    case U'.':
    case U',':
    case U';':
    case U':':
    case U'!':
    case U'?':
    case U'।':  // danda
    case U'॥':  // double danda
      return true;
    default:
      return false;
  }
}

// Zero-width joiners shape Devanagari conjuncts and must survive.
bool is_joiner(char32_t c) { return c == U'\u200C' || c == U'\u200D'; }

// Keeps letters, word-internal digits, apostrophes, hyphens and sentence
// punctuation; everything else becomes a space so neighbouring words stay apart.
std::u32string filter_characters(const std::u32string& text) {
  std::u32string out(text.size(), U' ');
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char32_t c = text[i];
    if (unicode::is_digit(c)) {
      std::size_t end = i;
      while (end < n && unicode::is_digit(text[end])) {
        ++end;
      }
      const bool touches_letter = (i > 0 && unicode::is_letter(text[i - 1])) ||
                                  (end < n && unicode::is_letter(text[end]));
      if (touches_letter) {
        for (std::size_t j = i; j < end; ++j) {
          out[j] = text[j];
        }
      }
      i = end;
      continue;
    }
    if (unicode::is_letter(c) || is_apostrophe(c) || is_hyphen(c) ||
        is_sentence_punctuation(c) || is_joiner(c)) {
      out[i] = c;
    }
    ++i;
  }
  return out;
}

std::string clean_once(std::string_view raw) {
  const Patterns& p = patterns();
  const icu::UnicodeString space(u" ");
  const icu::UnicodeString empty;

  icu::UnicodeString text = icu::UnicodeString::fromUTF8(unicode::nfc(raw));
  text = replace_all(p.wrapped(), text, space);
  text = replace_all(p.pair(), text, space);
  text = replace_all(p.leading(), text, empty);
  text = replace_all(p.trailing(), text, empty);
  text = replace_all(p.line_break(), text, space);

  std::string utf8;
  text.toUTF8String(utf8);
  const std::u32string filtered = filter_characters(unicode::decode(utf8));

  text = icu::UnicodeString::fromUTF8(unicode::encode(filtered));
  text = replace_all(p.whitespace(), text, space);
  text.trim();
  // trim() only strips ASCII-range spaces; the collapse above already
  // mapped every White_Space code point to U+0020.
  utf8.clear();
  text.toUTF8String(utf8);
  return utf8;
}

}  // namespace

std::string clean_verse(std::string_view raw) {
  // Removing one numbering token can expose another (e.g. "x 1 2"), so the
  // rules run to a fixed point; each productive pass shortens the text.
  constexpr int kMaxPasses = 16;
  std::string current = clean_once(raw);
  for (int pass = 1; pass < kMaxPasses; ++pass) {
    std::string next = clean_once(current);
    if (next == current) {
      break;
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace verse_eval
