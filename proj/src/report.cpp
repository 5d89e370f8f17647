#include "xlit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "xlit/errors.hpp"

namespace xlit {

namespace {

std::string one_decimal(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", value);
  return buf;
}

std::string group_of(const MetricReport& report, Grouping grouping) {
  return grouping == Grouping::AllLanguages ? "all"
                                            : report.language.script().code();
}

std::string render_tsv(const std::vector<AggregateRow>& rows) {
  std::string out = "group\tmode\tmean_score\tn_languages\n";
  for (const auto& row : rows) {
    out += row.group + "\t" + to_string(row.mode) + "\t" +
           one_decimal(row.mean_score) + "\t" +
           std::to_string(row.n_languages) + "\n";
  }
  return out;
}

std::string render_jsonl(const std::vector<AggregateRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    nlohmann::json j;
    j["group"] = row.group;
    j["mode"] = to_string(row.mode);
    j["mean_score"] = row.mean_score;
    j["n_languages"] = row.n_languages;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string render_markdown(const std::vector<AggregateRow>& rows,
                            const std::vector<MetricReport>& per_language) {
  // group -> mode -> row
  std::map<std::string, std::map<PromptMode, const AggregateRow*>> groups;
  for (const auto& row : rows) groups[row.group][row.mode] = &row;

  std::ostringstream out;
  out << "| Group | Orig | Latn | Combined | Languages |\n";
  out << "| --- | ---: | ---: | ---: | ---: |\n";
  for (const auto& [group, by_mode] : groups) {
    const AggregateRow* best = nullptr;
    for (PromptMode mode : kAllModes) {
      auto it = by_mode.find(mode);
      if (it != by_mode.end() &&
          (!best || it->second->mean_score > best->mean_score)) {
        best = it->second;
      }
    }
    std::size_t n_languages = 0;
    out << "| " << group << " |";
    for (PromptMode mode : kAllModes) {
      auto it = by_mode.find(mode);
      if (it == by_mode.end()) {
        out << " - |";
        continue;
      }
      n_languages = std::max(n_languages, it->second->n_languages);
      std::string cell = one_decimal(it->second->mean_score);
      if (it->second == best) cell = "**" + cell + "**";
      out << " " << cell << " |";
    }
    out << " " << n_languages << " |\n";
  }

  if (!per_language.empty()) {
    out << "\n| Language | Mode | Score |\n";
    out << "| --- | --- | ---: |\n";
    for (const auto& report : per_language) {
      out << "| " << report.language.str() << " | " << to_string(report.mode)
          << " | " << one_decimal(report.score) << " |\n";
    }
  }
  return out.str();
}

}  // namespace

Grouping grouping_from_string(std::string_view s) {
  if (s == "all") return Grouping::AllLanguages;
  if (s == "script") return Grouping::ByScript;
  throw ConfigError("unknown grouping '" + std::string(s) +
                    "' (expected all or script)");
}

ReportFormat report_format_from_string(std::string_view s) {
  if (s == "tsv") return ReportFormat::Tsv;
  if (s == "jsonl") return ReportFormat::Jsonl;
  if (s == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown format '" + std::string(s) +
                    "' (expected tsv, jsonl or md)");
}

std::vector<AggregateRow> aggregate(const std::vector<MetricReport>& reports,
                                    Grouping grouping) {
  if (reports.empty()) throw ConfigError("no reports to aggregate");
  TaskKind task = reports.front().task;
  std::set<std::pair<std::string, PromptMode>> seen;
  for (const auto& report : reports) {
    if (report.task != task) {
      throw ConfigError("reports mix task kinds " + to_string(task) + " and " +
                        to_string(report.task));
    }
    if (!seen.emplace(report.language.str(), report.mode).second) {
      throw ConfigError("duplicate report for " + report.language.str() +
                        " in mode " + to_string(report.mode));
    }
  }

  struct Bucket {
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::map<std::pair<std::string, PromptMode>, Bucket> buckets;
  for (const auto& report : reports) {
    auto& bucket = buckets[{group_of(report, grouping), report.mode}];
    bucket.sum += report.score;
    bucket.count += 1;
  }

  std::vector<AggregateRow> rows;
  rows.reserve(buckets.size());
  for (const auto& [key, bucket] : buckets) {
    AggregateRow row;
    row.group = key.first;
    row.mode = key.second;
    row.mean_score = bucket.sum / static_cast<double>(bucket.count);
    row.n_languages = bucket.count;
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const AggregateRow& a, const AggregateRow& b) {
              if (a.group != b.group) return a.group < b.group;
              return static_cast<int>(a.mode) < static_cast<int>(b.mode);
            });
  return rows;
}

std::string render_report(const std::vector<AggregateRow>& rows,
                          const std::vector<MetricReport>& per_language,
                          ReportFormat format) {
  if (rows.empty()) throw ConfigError("no aggregate rows to render");
  switch (format) {
    case ReportFormat::Tsv:
      return render_tsv(rows);
    case ReportFormat::Jsonl:
      return render_jsonl(rows);
    case ReportFormat::Markdown:
      return render_markdown(rows, per_language);
  }
  throw ConfigError("unknown report format");
}

AggregateRow aggregate_row_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad aggregate row JSON: ") + e.what());
  }
  try {
    AggregateRow row;
    row.group = j.at("group").get<std::string>();
    row.mode = prompt_mode_from_string(j.at("mode").get<std::string>());
    row.mean_score = j.at("mean_score").get<double>();
    row.n_languages = j.at("n_languages").get<std::size_t>();
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad aggregate row JSON: ") + e.what());
  }
}

std::vector<MetricReport> load_metric_reports(
    const std::vector<std::filesystem::path>& paths) {
  std::vector<MetricReport> reports;
  for (const auto& path : paths) {
    std::filesystem::path file = path;
    if (std::filesystem::is_directory(path)) {
      file = path / "metrics.json";
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + file.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    if (file.extension() == ".jsonl") {
      std::istringstream lines(content);
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(lines, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        try {
          reports.push_back(metric_report_from_json(line));
        } catch (const ConfigError& e) {
          throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                            ": " + e.what());
        }
      }
    } else {
      try {
        reports.push_back(metric_report_from_json(content));
      } catch (const ConfigError& e) {
        throw ConfigError(file.string() + ": " + e.what());
      }
    }
  }
  return reports;
}

}  // namespace xlit
