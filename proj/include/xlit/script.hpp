#pragma once

#include <string>
#include <string_view>

namespace xlit {

// Four-letter ISO 15924 script identifier, e.g. "Cyrl", "Arab", "Deva".
class ScriptTag {
 public:
  // Throws ConfigError unless `code` is 4 ASCII letters, first uppercase,
  // rest lowercase.
  explicit ScriptTag(std::string code);

  const std::string& code() const { return code_; }

  friend bool operator==(const ScriptTag& a, const ScriptTag& b) { return a.code_ == b.code_; }
  friend bool operator!=(const ScriptTag& a, const ScriptTag& b) { return !(a == b); }
  friend bool operator<(const ScriptTag& a, const ScriptTag& b) { return a.code_ < b.code_; }

  static bool is_valid(std::string_view code);

 private:
  std::string code_;
};

// Script of the codepoint per a block-level range table covering the major
// scripts, or "" when the codepoint is not a letter of any known script.
std::string_view script_of(char32_t cp);

// True for codepoints that sit inside words: letters of known scripts,
// combining marks, and the apostrophe.
bool is_word_codepoint(char32_t cp);

// Script of the majority of letter codepoints in `text` ("Latn" included),
// or "Zyyy" when the text has no letters. Ties break toward the
// lexicographically smallest code.
std::string detect_script(std::string_view text);

}  // namespace xlit
