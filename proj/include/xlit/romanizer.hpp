#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlit/script.hpp"

namespace xlit {

// Where a rule is allowed to match relative to word boundaries. A word
// boundary sits at the string edges and next to any codepoint that is not a
// letter, combining mark, or apostrophe (see is_word_codepoint).
enum class RuleContext { Any, Initial, Final };

struct MappingRule {
  std::u32string source;  // non-empty
  std::string target;     // drawn from [A-Za-z0-9' -], may be empty
  RuleContext context = RuleContext::Any;
};

// Ordered character/sequence -> Latin rules for one script. After
// normalization the rules are sorted longest-source-first, with Initial and
// Final rules ahead of Any among equal lengths.
struct MappingTable {
  ScriptTag script;
  std::vector<MappingRule> rules;
};

// What happens to a non-ASCII codepoint no rule covers.
//   DecomposeStrip: fold through the compatibility-decomposition table,
//                   keeping ASCII pieces and dropping combining marks;
//                   anything that does not fold is dropped.
//   Passthrough:    the codepoint is copied out unchanged.
//   Drop:           the codepoint is removed.
enum class FallbackPolicy { DecomposeStrip, Passthrough, Drop };

// Immutable after construction; safe to share across concurrent readers.
class RomanizerConfig {
 public:
  // Throws ConfigError when `tables` is empty or two tables collide on
  // (source, context).
  static RomanizerConfig from_tables(std::vector<MappingTable> tables,
                                     FallbackPolicy fallback = FallbackPolicy::DecomposeStrip,
                                     bool lowercase_output = false);

  const std::vector<MappingTable>& tables() const { return tables_; }
  FallbackPolicy fallback_policy() const { return fallback_; }
  bool lowercase_output() const { return lowercase_; }

  // Longest applicable rule at position `pos` of `text`, or nullptr.
  const MappingRule* match_at(const std::u32string& text, size_t pos) const;

 private:
  RomanizerConfig() = default;

  std::vector<MappingTable> tables_;
  FallbackPolicy fallback_ = FallbackPolicy::DecomposeStrip;
  bool lowercase_ = false;
  std::vector<MappingRule> merged_;
  std::unordered_map<char32_t, std::vector<uint32_t>> by_first_cp_;
};

// Parses one table file: UTF-8 lines of `source<TAB>target[<TAB>context]`,
// `#` comment lines and blank lines ignored, context one of
// initial|final|any. The script comes from the file stem. Throws ConfigError
// naming file and line on malformed input or duplicate (source, context).
MappingTable parse_table_file(const std::filesystem::path& file);

// Loads every `<ScriptTag>.tsv` in `directory`. Throws ConfigError when the
// directory has no table files or any file fails to parse.
RomanizerConfig load_tables(const std::filesystem::path& directory,
                            FallbackPolicy fallback = FallbackPolicy::DecomposeStrip,
                            bool lowercase_output = false);

// Greedy longest-match transliteration. ASCII codepoints pass through
// unchanged; unmapped non-ASCII follows the fallback policy. Total and
// deterministic over any Unicode input.
std::string romanize_text(const RomanizerConfig& config, std::string_view text);

// Word-level variant: same length as the input list, with whitespace the
// mapping produced inside a token collapsed to "-" (edges trimmed) so one
// input token never becomes two.
std::vector<std::string> romanize_tokens(const RomanizerConfig& config,
                                         const std::vector<std::string>& tokens);

}  // namespace xlit
