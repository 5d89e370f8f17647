#include "xlit/parse_metrics.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "json.hpp"
#include "xlit/errors.hpp"

namespace xlit {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<Tag> match_tag(std::string_view word) {
  std::string upper = ascii_lower(word);
  for (char& c : upper) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  for (Tag t : kAllTags) {
    if (tag_name(t) == upper) return t;
  }
  return std::nullopt;
}

bool is_tag_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '-';
}

// Matches a tag name starting at `at`, requiring a non-tag character (or
// the end) right after it so "O" does not fire inside "Old". Longer names
// are tried first. Returns the position past the match.
std::optional<std::pair<Tag, std::size_t>> match_tag_at(std::string_view line,
                                                        std::size_t at) {
  constexpr Tag kByLength[] = {Tag::B_PER, Tag::I_PER, Tag::B_ORG,
                               Tag::I_ORG, Tag::B_LOC, Tag::I_LOC, Tag::O};
  for (Tag t : kByLength) {
    std::string_view name = tag_name(t);
    if (at + name.size() > line.size()) continue;
    bool equal = true;
    for (std::size_t i = 0; i < name.size() && equal; ++i) {
      equal = std::toupper(static_cast<unsigned char>(line[at + i])) ==
              static_cast<unsigned char>(name[i]);
    }
    if (!equal) continue;
    std::size_t end = at + name.size();
    if (end < line.size() && is_tag_char(line[end])) continue;
    return std::make_pair(t, end);
  }
  return std::nullopt;
}

struct PairCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

std::array<PairCounts, kTagCount> count_pairs(
    const std::vector<std::vector<Tag>>& gold,
    const std::vector<std::vector<Tag>>& pred) {
  if (gold.empty()) throw EvalError("no examples to score");
  if (gold.size() != pred.size()) {
    throw EvalError("gold has " + std::to_string(gold.size()) +
                    " sentences, predictions have " +
                    std::to_string(pred.size()));
  }
  std::array<PairCounts, kTagCount> counts{};
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw EvalError("sentence " + std::to_string(s) + ": gold has " +
                      std::to_string(gold[s].size()) +
                      " tags, prediction has " +
                      std::to_string(pred[s].size()));
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      auto g = static_cast<std::size_t>(gold[s][t]);
      auto p = static_cast<std::size_t>(pred[s][t]);
      if (g == p) {
        ++counts[g].tp;
      } else {
        ++counts[g].fn;
        ++counts[p].fp;
      }
    }
  }
  return counts;
}

nlohmann::json class_score_to_json(const ClassScore& s) {
  return {{"precision", s.precision},
          {"recall", s.recall},
          {"f1", s.f1},
          {"support", s.support}};
}

}  // namespace

std::vector<Tag> parse_seqlab_output(std::string_view raw,
                                     std::size_t token_count) {
  std::vector<Tag> tags;

  // Lenient pass: every "...: TAG" occurrence, in reading order.
  std::size_t i = 0;
  while (i < raw.size() && tags.size() < token_count) {
    if (raw[i] != ':') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < raw.size() && (raw[j] == ' ' || raw[j] == '\t')) ++j;
    if (auto hit = match_tag_at(raw, j)) {
      tags.push_back(hit->first);
      i = hit->second;
    } else {
      ++i;
    }
  }

  if (tags.empty()) {
    std::size_t start = 0;
    auto is_break = [](char c) {
      return std::isspace(static_cast<unsigned char>(c)) || c == ',';
    };
    for (std::size_t i = 0; i <= raw.size() && tags.size() < token_count;
         ++i) {
      if (i < raw.size() && !is_break(raw[i])) continue;
      if (i > start) {
        if (auto tag = match_tag(raw.substr(start, i - start))) {
          tags.push_back(*tag);
        }
      }
      start = i + 1;
    }
  }

  tags.resize(token_count, Tag::O);
  return tags;
}

std::optional<std::string> parse_cls_output(
    std::string_view raw,
    const std::map<std::string, std::string>& verbalizers) {
  std::string haystack = ascii_lower(raw);
  std::optional<std::string> best_label;
  std::size_t best_pos = 0;
  std::size_t best_len = 0;
  for (const auto& [label, surface] : verbalizers) {
    if (surface.empty()) continue;
    std::size_t at = haystack.find(ascii_lower(surface));
    if (at == std::string::npos) continue;
    bool better = !best_label || at < best_pos ||
                  (at == best_pos && surface.size() > best_len);
    if (better) {
      best_label = label;
      best_pos = at;
      best_len = surface.size();
    }
  }
  return best_label;
}

std::map<Tag, ClassScore> per_class_scores(
    const std::vector<std::vector<Tag>>& gold,
    const std::vector<std::vector<Tag>>& pred) {
  auto counts = count_pairs(gold, pred);
  std::map<Tag, ClassScore> out;
  for (Tag t : kAllTags) {
    const auto& c = counts[static_cast<std::size_t>(t)];
    if (c.tp + c.fp + c.fn == 0) continue;
    ClassScore score;
    score.support = c.tp + c.fn;
    double denom_p = static_cast<double>(c.tp + c.fp);
    double denom_r = static_cast<double>(c.tp + c.fn);
    score.precision = denom_p > 0 ? static_cast<double>(c.tp) / denom_p : 0.0;
    score.recall = denom_r > 0 ? static_cast<double>(c.tp) / denom_r : 0.0;
    double pr = score.precision + score.recall;
    score.f1 = pr > 0 ? 2.0 * score.precision * score.recall / pr : 0.0;
    out.emplace(t, score);
  }
  return out;
}

double token_macro_f1(const std::vector<std::vector<Tag>>& gold,
                      const std::vector<std::vector<Tag>>& pred) {
  auto scores = per_class_scores(gold, pred);
  double sum = 0.0;
  for (const auto& [tag, score] : scores) sum += score.f1;
  return sum / static_cast<double>(scores.size());
}

double accuracy(const std::vector<std::string>& gold,
                const std::vector<std::optional<std::string>>& pred) {
  if (gold.empty()) throw EvalError("no examples to score");
  if (gold.size() != pred.size()) {
    throw EvalError("gold has " + std::to_string(gold.size()) +
                    " labels, predictions have " + std::to_string(pred.size()));
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] && *pred[i] == gold[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

std::string to_json_line(const MetricReport& report) {
  nlohmann::json j;
  j["task"] = to_string(report.task);
  j["language"] = report.language.str();
  j["mode"] = to_string(report.mode);
  j["score"] = report.score;
  j["n_examples"] = report.n_examples;
  j["n_unparsed"] = report.n_unparsed;
  nlohmann::json per_class = nlohmann::json::object();
  for (const auto& [name, score] : report.per_class) {
    per_class[name] = class_score_to_json(score);
  }
  j["per_class"] = per_class;
  return j.dump();
}

MetricReport metric_report_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad report JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("report JSON is not an object");
  for (const char* key : {"task", "language", "mode", "score"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("report JSON missing '") + key + "'");
    }
  }
  try {
    MetricReport report;
    report.task = task_kind_from_string(j.at("task").get<std::string>());
    report.language = LanguageTag::parse(j.at("language").get<std::string>());
    report.mode = prompt_mode_from_string(j.at("mode").get<std::string>());
    report.score = j.at("score").get<double>();
    if (!(report.score >= 0.0 && report.score <= 100.0)) {
      throw ConfigError("report score " + std::to_string(report.score) +
                        " outside [0, 100]");
    }
    report.n_examples = j.value("n_examples", std::size_t{0});
    report.n_unparsed = j.value("n_unparsed", std::size_t{0});
    if (j.contains("per_class")) {
      for (const auto& [name, value] : j.at("per_class").items()) {
        ClassScore score;
        score.precision = value.value("precision", 0.0);
        score.recall = value.value("recall", 0.0);
        score.f1 = value.value("f1", 0.0);
        score.support = value.value("support", std::size_t{0});
        report.per_class.emplace(name, score);
      }
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad report JSON: ") + e.what());
  }
}

}  // namespace xlit
