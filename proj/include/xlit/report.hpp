#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xlit/parse_metrics.hpp"

namespace xlit {

enum class Grouping { AllLanguages, ByScript };
enum class ReportFormat { Tsv, Jsonl, Markdown };

Grouping grouping_from_string(std::string_view s);
ReportFormat report_format_from_string(std::string_view s);

struct AggregateRow {
  // "all" for the whole-set mean, otherwise the script code.
  std::string group;
  PromptMode mode;
  double mean_score = 0.0;
  std::size_t n_languages = 0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

// Unweighted mean score per (group, mode). All reports must share one task
// kind and no (language, mode) pair may repeat. Rows come back ordered by
// group ascending, then mode in orig/latn/combined order. Throws
// ConfigError on empty input, mixed tasks or duplicates.
std::vector<AggregateRow> aggregate(const std::vector<MetricReport>& reports,
                                    Grouping grouping);

// Renders aggregate rows. tsv: header plus one line per row, scores to one
// decimal. jsonl: one full-precision JSON object per row, which parses back
// to equal rows. markdown: a table with one row per group and one column
// per mode, the best mode of each group bold (ties break toward the earlier
// mode); per_language, when nonempty, is appended as a detail table.
// per_language is ignored by tsv and jsonl.
std::string render_report(const std::vector<AggregateRow>& rows,
                          const std::vector<MetricReport>& per_language,
                          ReportFormat format);

AggregateRow aggregate_row_from_json(std::string_view json_text);

// Reads MetricReports for aggregation. Each path is either a run directory
// (its metrics.json is read) or a JSON-lines file of reports.
std::vector<MetricReport> load_metric_reports(
    const std::vector<std::filesystem::path>& paths);

}  // namespace xlit
