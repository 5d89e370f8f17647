#include "xlit/romanizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "xlit/errors.hpp"
#include "xlit/utf8.hpp"

namespace xlit {
namespace {

struct AsciiFoldEntry {
  char32_t cp;
  const char* ascii;
};

#include "ascii_fold_data.inc"

const char* fold_ascii(char32_t cp) {
  const auto* end = kAsciiFoldTable + std::size(kAsciiFoldTable);
  const auto* it = std::lower_bound(kAsciiFoldTable, end, cp,
                                    [](const AsciiFoldEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it->ascii : nullptr;
}

bool valid_target(std::string_view target) {
  for (char c : target) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == ' ' || c == '-';
    if (!ok || static_cast<unsigned char>(c) >= 128) return false;
  }
  return true;
}

int context_rank(RuleContext c) {
  switch (c) {
    case RuleContext::Initial: return 0;
    case RuleContext::Final: return 1;
    case RuleContext::Any: return 2;
  }
  return 2;
}

void normalize_rule_order(std::vector<MappingRule>& rules) {
  std::stable_sort(rules.begin(), rules.end(), [](const MappingRule& a, const MappingRule& b) {
    if (a.source.size() != b.source.size()) return a.source.size() > b.source.size();
    if (a.context != b.context) return context_rank(a.context) < context_rank(b.context);
    return a.source < b.source;
  });
}

bool context_applies(const std::u32string& text, size_t pos, size_t len, RuleContext ctx) {
  switch (ctx) {
    case RuleContext::Any:
      return true;
    case RuleContext::Initial:
      return pos == 0 || !is_word_codepoint(text[pos - 1]);
    case RuleContext::Final:
      return pos + len == text.size() || !is_word_codepoint(text[pos + len]);
  }
  return true;
}

std::string context_name(RuleContext c) {
  switch (c) {
    case RuleContext::Initial: return "initial";
    case RuleContext::Final: return "final";
    case RuleContext::Any: return "any";
  }
  return "any";
}

}  // namespace

RomanizerConfig RomanizerConfig::from_tables(std::vector<MappingTable> tables,
                                             FallbackPolicy fallback, bool lowercase_output) {
  if (tables.empty()) {
    throw ConfigError("no tables found: at least one mapping table is required");
  }
  RomanizerConfig config;
  config.tables_ = std::move(tables);
  config.fallback_ = fallback;
  config.lowercase_ = lowercase_output;

  std::map<std::pair<std::u32string, RuleContext>, std::string> seen;
  for (const auto& table : config.tables_) {
    for (const auto& rule : table.rules) {
      auto [it, inserted] = seen.emplace(std::make_pair(rule.source, rule.context), table.script.code());
      if (!inserted) {
        throw ConfigError("duplicate rule (" + utf8::encode(rule.source) + ", " +
                          context_name(rule.context) + ") appears in tables " + it->second +
                          " and " + table.script.code());
      }
      config.merged_.push_back(rule);
    }
  }
  normalize_rule_order(config.merged_);
  for (uint32_t i = 0; i < config.merged_.size(); ++i) {
    config.by_first_cp_[config.merged_[i].source[0]].push_back(i);
  }
  return config;
}

const MappingRule* RomanizerConfig::match_at(const std::u32string& text, size_t pos) const {
  auto it = by_first_cp_.find(text[pos]);
  if (it == by_first_cp_.end()) return nullptr;
  for (uint32_t idx : it->second) {
    const MappingRule& rule = merged_[idx];
    const size_t len = rule.source.size();
    if (pos + len > text.size()) continue;
    if (text.compare(pos, len, rule.source) != 0) continue;
    if (!context_applies(text, pos, len, rule.context)) continue;
    return &rule;
  }
  return nullptr;
}

MappingTable parse_table_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open table file " + file.string());
  }
  const std::string stem = file.stem().string();
  if (!ScriptTag::is_valid(stem)) {
    throw ConfigError("table file " + file.string() +
                      ": name must be <ScriptTag>.tsv (e.g. Cyrl.tsv)");
  }
  MappingTable table{ScriptTag(stem), {}};
  std::set<std::pair<std::u32string, RuleContext>> seen;

  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    const auto where = [&] { return file.string() + ":" + std::to_string(lineno); };
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ConfigError(where() + ": expected source<TAB>target[<TAB>context], got " +
                        std::to_string(fields.size()) + " field(s)");
    }
    MappingRule rule;
    rule.source = utf8::decode(fields[0]);
    rule.target = fields[1];
    if (rule.source.empty()) {
      throw ConfigError(where() + ": empty source");
    }
    if (!valid_target(rule.target)) {
      throw ConfigError(where() + ": target '" + rule.target +
                        "' has characters outside [A-Za-z0-9' -]");
    }
    if (fields.size() == 3) {
      const std::string& ctx = fields[2];
      if (ctx == "initial") {
        rule.context = RuleContext::Initial;
      } else if (ctx == "final") {
        rule.context = RuleContext::Final;
      } else if (ctx == "any" || ctx.empty()) {
        rule.context = RuleContext::Any;
      } else {
        throw ConfigError(where() + ": unknown context '" + ctx + "' (want initial|final|any)");
      }
    }
    if (!seen.emplace(rule.source, rule.context).second) {
      throw ConfigError(where() + ": duplicate rule for (" + fields[0] + ", " +
                        context_name(rule.context) + ")");
    }
    table.rules.push_back(std::move(rule));
  }
  normalize_rule_order(table.rules);
  return table;
}

RomanizerConfig load_tables(const std::filesystem::path& directory, FallbackPolicy fallback,
                            bool lowercase_output) {
  if (!std::filesystem::is_directory(directory)) {
    throw ConfigError("tables directory " + directory.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ConfigError("no tables found in " + directory.string());
  }
  std::vector<MappingTable> tables;
  tables.reserve(files.size());
  for (const auto& f : files) {
    tables.push_back(parse_table_file(f));
  }
  return RomanizerConfig::from_tables(std::move(tables), fallback, lowercase_output);
}

std::string romanize_text(const RomanizerConfig& config, std::string_view text) {
  const std::u32string in = utf8::decode(text);
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < in.size()) {
    const char32_t cp = in[pos];
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
      ++pos;
      continue;
    }
    if (const MappingRule* rule = config.match_at(in, pos)) {
      out += rule->target;
      pos += rule->source.size();
      continue;
    }
    switch (config.fallback_policy()) {
      case FallbackPolicy::DecomposeStrip:
        if (const char* folded = fold_ascii(cp)) {
          out += folded;
        }
        // ignorable marks and unfoldable codepoints are stripped
        break;
      case FallbackPolicy::Passthrough:
        utf8::append(out, cp);
        break;
      case FallbackPolicy::Drop:
        break;
    }
    ++pos;
  }
  if (config.lowercase_output()) {
    for (char& c : out) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::vector<std::string> romanize_tokens(const RomanizerConfig& config,
                                         const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    std::string r = romanize_text(config, token);
    // collapse whitespace runs to "-", trimming the edges
    std::string joined;
    joined.reserve(r.size());
    size_t i = 0, n = r.size();
    while (n > 0 && std::isspace(static_cast<unsigned char>(r[n - 1]))) --n;
    while (i < n && std::isspace(static_cast<unsigned char>(r[i]))) ++i;
    bool in_space = false;
    for (; i < n; ++i) {
      if (std::isspace(static_cast<unsigned char>(r[i]))) {
        in_space = true;
      } else {
        if (in_space) joined.push_back('-');
        in_space = false;
        joined.push_back(r[i]);
      }
    }
    out.push_back(std::move(joined));
  }
  return out;
}

}  // namespace xlit
