#include "xlit/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <set>

#include "xlit/errors.hpp"

namespace xlit {

namespace {

std::string location(const std::filesystem::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

constexpr std::array<std::string_view, kTagCount> kTagNames = {
    "O", "B-PER", "I-PER", "B-ORG", "I-ORG", "B-LOC", "I-LOC"};

}  // namespace

LanguageTag::LanguageTag(std::string language, ScriptTag script)
    : language_(std::move(language)), script_(std::move(script)) {
  bool ok = language_.size() == 3;
  for (char c : language_) ok = ok && c >= 'a' && c <= 'z';
  if (!ok) {
    throw ConfigError("invalid language code '" + language_ +
                      "' (expected three lowercase letters)");
  }
}

LanguageTag LanguageTag::parse(std::string_view tag) {
  auto sep = tag.find('_');
  if (sep == std::string_view::npos || tag.find('_', sep + 1) != std::string_view::npos) {
    throw ConfigError("invalid language tag '" + std::string(tag) +
                      "' (expected lll_Ssss)");
  }
  return LanguageTag(std::string(tag.substr(0, sep)),
                     ScriptTag(std::string(tag.substr(sep + 1))));
}

std::string_view tag_name(Tag t) {
  return kTagNames[static_cast<std::size_t>(t)];
}

Tag parse_tag(std::string_view name) {
  for (int i = 0; i < kTagCount; ++i) {
    if (kTagNames[static_cast<std::size_t>(i)] == name) {
      return static_cast<Tag>(i);
    }
  }
  throw ConfigError("unknown tag '" + std::string(name) + "'");
}

std::vector<Example> load_seqlab(const std::filesystem::path& file) {
  auto lines = read_lines(file);
  std::string stem = file.stem().string();
  std::vector<Example> examples;
  SeqLabPayload current;

  auto flush = [&] {
    if (current.tokens.empty()) return;
    Example ex;
    ex.id = stem + ":" + std::to_string(examples.size());
    ex.payload = std::move(current);
    examples.push_back(std::move(ex));
    current = {};
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) {
      flush();
      continue;
    }
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ConfigError(location(file, i + 1) +
                        ": expected token<TAB>tag in sentence " +
                        std::to_string(examples.size()));
    }
    current.tokens.push_back(fields[0]);
    try {
      current.tags.push_back(parse_tag(fields[1]));
    } catch (const ConfigError& e) {
      throw ConfigError(location(file, i + 1) + ": " + e.what() +
                        " in sentence " + std::to_string(examples.size()));
    }
  }
  flush();
  return examples;
}

std::vector<Example> load_cls(const std::filesystem::path& file,
                              const std::vector<std::string>& label_set) {
  if (label_set.empty()) throw ConfigError("empty label set");
  auto lines = read_lines(file);
  std::string stem = file.stem().string();
  std::vector<Example> examples;
  std::set<std::string> seen_ids;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    auto first = line.find('\t');
    auto second = first == std::string::npos ? first : line.find('\t', first + 1);
    if (second == std::string::npos) {
      throw ConfigError(location(file, i + 1) +
                        ": expected id<TAB>label<TAB>text");
    }
    ClsPayload payload;
    std::string id = line.substr(0, first);
    payload.label = line.substr(first + 1, second - first - 1);
    payload.text = line.substr(second + 1);
    if (payload.text.empty()) {
      throw ConfigError(location(file, i + 1) + ": empty text");
    }
    if (std::find(label_set.begin(), label_set.end(), payload.label) ==
        label_set.end()) {
      throw ConfigError(location(file, i + 1) + ": label '" + payload.label +
                        "' not in label set");
    }
    if (id.empty()) id = stem + ":" + std::to_string(examples.size());
    if (!seen_ids.insert(id).second) {
      throw ConfigError(location(file, i + 1) + ": duplicate id '" + id + "'");
    }
    examples.push_back(Example{std::move(id), std::move(payload)});
  }
  return examples;
}

std::map<std::string, EmbeddingVector> load_embeddings(
    const std::filesystem::path& file) {
  auto lines = read_lines(file);
  std::map<std::string, EmbeddingVector> out;
  std::size_t dim = 0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw ConfigError(location(file, i + 1) +
                        ": expected id<TAB>v1,v2,...");
    }
    EmbeddingVector vec;
    vec.example_id = line.substr(0, tab);

    std::size_t start = tab + 1;
    bool any_nonzero = false;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      std::size_t end = comma == std::string::npos ? line.size() : comma;
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(line.data() + start, line.data() + end, value);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw ConfigError(location(file, i + 1) + ": bad component '" +
                          line.substr(start, end - start) + "'");
      }
      vec.values.push_back(value);
      any_nonzero = any_nonzero || value != 0.0;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }

    if (dim == 0) {
      dim = vec.values.size();
    } else if (vec.values.size() != dim) {
      throw ConfigError(location(file, i + 1) + ": dimension " +
                        std::to_string(vec.values.size()) + " differs from " +
                        std::to_string(dim));
    }
    if (!any_nonzero) {
      throw ConfigError(location(file, i + 1) + ": zero vector for id '" +
                        vec.example_id + "'");
    }
    std::string key = vec.example_id;
    if (!out.emplace(std::move(key), std::move(vec)).second) {
      throw ConfigError(location(file, i + 1) + ": duplicate id '" +
                        line.substr(0, tab) + "'");
    }
  }
  return out;
}

void write_seqlab(const std::filesystem::path& file,
                  const std::vector<Example>& examples) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& payload = examples[i].seqlab();
    if (i > 0) out << '\n';
    for (std::size_t t = 0; t < payload.tokens.size(); ++t) {
      out << payload.tokens[t] << '\t' << tag_name(payload.tags[t]) << '\n';
    }
  }
}

void write_cls(const std::filesystem::path& file,
               const std::vector<Example>& examples) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + file.string());
  for (const auto& ex : examples) {
    const auto& payload = ex.cls();
    out << ex.id << '\t' << payload.label << '\t' << payload.text << '\n';
  }
}

}  // namespace xlit
