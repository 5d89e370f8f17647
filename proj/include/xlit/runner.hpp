#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "xlit/corpus.hpp"
#include "xlit/demo_selector.hpp"
#include "xlit/parse_metrics.hpp"
#include "xlit/romanizer.hpp"
#include "xlit/task.hpp"

namespace xlit {

// Everything one evaluation run needs. Paths are kept absolute so the
// snapshot written next to the results re-runs from anywhere.
struct RunConfig {
  TaskKind task = TaskKind::Cls;
  LanguageTag language{"und", ScriptTag("Zyyy")};
  PromptMode mode = PromptMode::Orig;
  std::uint64_t seed = 0;
  SelectionPolicy policy = RandomCoverage{3, 8};
  std::filesystem::path tables_dir;
  std::filesystem::path demos_file;
  std::filesystem::path queries_file;
  std::filesystem::path embeddings_file;
  std::filesystem::path templates_dir;
  std::filesystem::path record_file;
  std::vector<std::string> labels;
  std::string backend;
  FallbackPolicy fallback = FallbackPolicy::DecomposeStrip;
  bool lowercase = false;
  int concurrency = 4;
  // 0 picks the task default: 16 for classification, 8 per query token for
  // sequence labeling.
  int max_new_tokens = 0;
};

// Reads a UTF-8 "key = value" document: one pair per line, '#' comments and
// blank lines skipped. Pairs come back in file order. Throws ConfigError
// citing file and line on malformed lines or repeated keys.
std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::filesystem::path& file);

// Builds a RunConfig from key-value pairs (config file order, later pairs
// from CLI overrides winning). Relative paths resolve against base_dir.
// Validation is collected: the error lists every violated field at once.
RunConfig run_config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::filesystem::path& base_dir);

// The config as a key = value document with absolute paths and all
// defaults spelled out, so it re-validates and re-runs unchanged.
std::string snapshot_config(const RunConfig& config);

struct RunResult {
  MetricReport report;
  std::filesystem::path records_file;
  std::filesystem::path metrics_file;
  std::filesystem::path snapshot_file;
};

// Runs the full pipeline: load tables and corpora, pick demos, render
// prompts, complete them against the backend with bounded parallelism,
// parse, score, and write records.jsonl (sorted by example id),
// metrics.json and config.snapshot into out_dir.
RunResult run_evaluation(const RunConfig& config,
                         const std::filesystem::path& out_dir);

}  // namespace xlit
