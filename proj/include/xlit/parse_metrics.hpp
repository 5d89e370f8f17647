#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xlit/corpus.hpp"
#include "xlit/task.hpp"

namespace xlit {

// Extracts a tag sequence from raw model output for a query of token_count
// tokens. Lines of the form "token: TAG" are read first; if no such line
// exists, bare tag names in the output are collected instead. The result is
// truncated or padded with O to exactly token_count tags. Tag names match
// case-insensitively.
std::vector<Tag> parse_seqlab_output(std::string_view raw,
                                     std::size_t token_count);

// Maps raw model output to a class label by scanning for verbalizer
// surfaces (label -> surface). The earliest case-insensitive occurrence
// wins; ties at one position go to the longer surface, then the smaller
// label. Returns nullopt when no surface occurs, which scores as wrong.
std::optional<std::string> parse_cls_output(
    std::string_view raw, const std::map<std::string, std::string>& verbalizers);

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// Token-level scores per tag class, O included. Classes that occur in
// neither gold nor predictions are omitted. A precision or recall whose
// denominator is zero counts as 0. Throws EvalError on shape mismatches.
std::map<Tag, ClassScore> per_class_scores(
    const std::vector<std::vector<Tag>>& gold,
    const std::vector<std::vector<Tag>>& pred);

// Unweighted mean F1 over the classes per_class_scores reports, in [0, 1].
double token_macro_f1(const std::vector<std::vector<Tag>>& gold,
                      const std::vector<std::vector<Tag>>& pred);

// Fraction of predictions equal to gold, in [0, 1]. Unparsed predictions
// (nullopt) count as wrong. Throws EvalError on size mismatch or when there
// is nothing to score.
double accuracy(const std::vector<std::string>& gold,
                const std::vector<std::optional<std::string>>& pred);

// Scores for one (task, language, mode) evaluation. score is a percentage.
struct MetricReport {
  TaskKind task = TaskKind::SeqLab;
  LanguageTag language{"und", ScriptTag("Zyyy")};
  PromptMode mode = PromptMode::Orig;
  double score = 0.0;
  std::size_t n_examples = 0;
  std::size_t n_unparsed = 0;
  std::map<std::string, ClassScore> per_class;
};

// One-line JSON form, full double precision, keys in a fixed order.
std::string to_json_line(const MetricReport& report);

// Parses a JSON object produced by to_json_line (extra keys are ignored;
// task, language, mode and score are required). Throws ConfigError on
// malformed input.
MetricReport metric_report_from_json(std::string_view json_text);

}  // namespace xlit
