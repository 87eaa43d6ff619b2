#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace verse_eval::testing {

inline std::filesystem::path fixtures() { return VERSE_EVAL_FIXTURES; }

// Fresh scratch directory under the build tree, emptied on every call.
inline std::filesystem::path scratch(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path(VERSE_EVAL_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string random_word(std::mt19937_64& rng, const std::string& alphabet, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out;
  for (int i = len(rng); i > 0; --i) {
    out += alphabet[pick(rng)];
  }
  return out;
}

}  // namespace verse_eval::testing
