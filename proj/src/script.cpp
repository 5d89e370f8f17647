#include "xlit/script.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "xlit/errors.hpp"
#include "xlit/utf8.hpp"

namespace xlit {
namespace {

struct ScriptRange {
  char32_t lo;
  char32_t hi;  // inclusive
  const char* script;
};

// Block-level assignment of the major scripts. Coarse on purpose: the tool
// only needs majority votes and word-boundary checks, not full Unicode
// Script property fidelity.
constexpr ScriptRange kScriptRanges[] = {
    {0x0041, 0x005A, "Latn"},   {0x0061, 0x007A, "Latn"},
    {0x00C0, 0x00D6, "Latn"},   {0x00D8, 0x00F6, "Latn"},
    {0x00F8, 0x024F, "Latn"},   {0x0370, 0x0373, "Grek"},
    {0x0376, 0x0377, "Grek"},   {0x037B, 0x037D, "Grek"},
    {0x037F, 0x037F, "Grek"},   {0x0386, 0x0386, "Grek"},
    {0x0388, 0x03E1, "Grek"},   {0x03F0, 0x03FF, "Grek"},
    {0x0400, 0x052F, "Cyrl"},   {0x0531, 0x0556, "Armn"},
    {0x0560, 0x0588, "Armn"},   {0x0591, 0x05F4, "Hebr"},
    {0x0600, 0x06FF, "Arab"},   {0x0750, 0x077F, "Arab"},
    {0x0780, 0x07BF, "Thaa"},   {0x08A0, 0x08FF, "Arab"},
    {0x0900, 0x097F, "Deva"},   {0x0980, 0x09FF, "Beng"},
    {0x0A01, 0x0A7F, "Guru"},   {0x0A81, 0x0AFF, "Gujr"},
    {0x0B01, 0x0B7F, "Orya"},   {0x0B82, 0x0BFF, "Taml"},
    {0x0C00, 0x0C7F, "Telu"},   {0x0C80, 0x0CFF, "Knda"},
    {0x0D00, 0x0D7F, "Mlym"},   {0x0D81, 0x0DFF, "Sinh"},
    {0x0E01, 0x0E5B, "Thai"},   {0x0E81, 0x0EFF, "Laoo"},
    {0x0F00, 0x0FFF, "Tibt"},   {0x1000, 0x109F, "Mymr"},
    {0x10A0, 0x10FF, "Geor"},   {0x1100, 0x11FF, "Hang"},
    {0x1200, 0x139F, "Ethi"},   {0x13A0, 0x13FF, "Cher"},
    {0x1780, 0x17FF, "Khmr"},   {0x1800, 0x18AF, "Mong"},
    {0x1C80, 0x1C88, "Cyrl"},   {0x1C90, 0x1CBF, "Geor"},
    {0x1E00, 0x1EFF, "Latn"},   {0x1F00, 0x1FFF, "Grek"},
    {0x2C60, 0x2C7F, "Latn"},   {0x2D00, 0x2D2F, "Geor"},
    {0x2D80, 0x2DDF, "Ethi"},   {0x2DE0, 0x2DFF, "Cyrl"},
    {0x2E80, 0x2FDF, "Hani"},   {0x3005, 0x3007, "Hani"},
    {0x3040, 0x309F, "Hira"},   {0x30A0, 0x30FF, "Kana"},
    {0x3130, 0x318F, "Hang"},   {0x31F0, 0x31FF, "Kana"},
    {0x3400, 0x4DBF, "Hani"},   {0x4E00, 0x9FFF, "Hani"},
    {0xA640, 0xA69F, "Cyrl"},   {0xA720, 0xA7FF, "Latn"},
    {0xA8E0, 0xA8FF, "Deva"},   {0xA960, 0xA97F, "Hang"},
    {0xAA60, 0xAA7F, "Mymr"},   {0xAB00, 0xAB2F, "Ethi"},
    {0xAC00, 0xD7FF, "Hang"},   {0xF900, 0xFAFF, "Hani"},
    {0xFB1D, 0xFB4F, "Hebr"},   {0xFB50, 0xFDFF, "Arab"},
    {0xFE70, 0xFEFF, "Arab"},   {0xFF66, 0xFF9F, "Kana"},
    {0x20000, 0x2A6DF, "Hani"},
};

// Combining marks that do not fall inside a script block above (generic
// diacritics block). They count as word-internal but vote for no script.
constexpr ScriptRange kGenericMarkRanges[] = {
    {0x0300, 0x036F, ""},
    {0x1AB0, 0x1AFF, ""},
    {0x1DC0, 0x1DFF, ""},
    {0x20D0, 0x20FF, ""},
    {0xFE00, 0xFE0F, ""},
    {0xFE20, 0xFE2F, ""},
};

const ScriptRange* find_range(char32_t cp) {
  const auto* end = kScriptRanges + std::size(kScriptRanges);
  const auto* it = std::upper_bound(kScriptRanges, end, cp, [](char32_t c, const ScriptRange& r) {
    return c < r.lo;
  });
  if (it == kScriptRanges) return nullptr;
  --it;
  return (cp >= it->lo && cp <= it->hi) ? it : nullptr;
}

bool in_generic_marks(char32_t cp) {
  for (const auto& r : kGenericMarkRanges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

}  // namespace

ScriptTag::ScriptTag(std::string code) : code_(std::move(code)) {
  if (!is_valid(code_)) {
    throw ConfigError("invalid script tag '" + code_ +
                      "': expected 4 ASCII letters, first uppercase, rest lowercase");
  }
}

bool ScriptTag::is_valid(std::string_view code) {
  if (code.size() != 4) return false;
  if (!std::isupper(static_cast<unsigned char>(code[0]))) return false;
  for (size_t i = 1; i < 4; ++i) {
    if (!std::islower(static_cast<unsigned char>(code[i]))) return false;
  }
  return true;
}

std::string_view script_of(char32_t cp) {
  const ScriptRange* r = find_range(cp);
  return r ? std::string_view(r->script) : std::string_view();
}

bool is_word_codepoint(char32_t cp) {
  if (cp == U'\'') return true;
  if (find_range(cp) != nullptr) return true;
  return in_generic_marks(cp);
}

std::string detect_script(std::string_view text) {
  std::map<std::string_view, size_t> votes;
  size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = utf8::decode_next(text, i);
    const std::string_view s = script_of(cp);
    if (!s.empty()) ++votes[s];
  }
  if (votes.empty()) return "Zyyy";
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    if (it->second > best->second) best = it;  // ties keep the smaller code
  }
  return std::string(best->first);
}

}  // namespace xlit
