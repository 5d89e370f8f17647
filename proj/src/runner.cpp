#include "xlit/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "xlit/errors.hpp"
#include "xlit/llm_client.hpp"
#include "xlit/prompt_builder.hpp"

namespace xlit {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(value.substr(start)));
      break;
    }
    out.push_back(trim(value.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

FallbackPolicy fallback_from_string(const std::string& s) {
  if (s == "decompose-strip") return FallbackPolicy::DecomposeStrip;
  if (s == "passthrough") return FallbackPolicy::Passthrough;
  if (s == "drop") return FallbackPolicy::Drop;
  throw ConfigError("unknown fallback '" + s +
                    "' (expected decompose-strip, passthrough or drop)");
}

std::string to_string(FallbackPolicy p) {
  switch (p) {
    case FallbackPolicy::DecomposeStrip:
      return "decompose-strip";
    case FallbackPolicy::Passthrough:
      return "passthrough";
    case FallbackPolicy::Drop:
      return "drop";
  }
  return "decompose-strip";
}

// Gathers every violation before failing so one pass reports them all.
class ConfigReader {
 public:
  explicit ConfigReader(
      const std::vector<std::pair<std::string, std::string>>& pairs) {
    for (const auto& [key, value] : pairs) values_[key] = value;
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return values_.count(key) > 0;
  }

  std::string get(const std::string& key, const std::string& fallback = "") {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require(const std::string& key) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end() || it->second.empty()) {
      problem(key + ": required");
      return "";
    }
    return it->second;
  }

  long long get_int(const std::string& key, long long fallback, long long lo,
                    long long hi) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    long long parsed = 0;
    const std::string& v = it->second;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      problem(key + ": '" + v + "' is not an integer");
      return fallback;
    }
    if (parsed < lo || parsed > hi) {
      problem(key + ": " + v + " outside [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]");
      return fallback;
    }
    return parsed;
  }

  bool get_bool(const std::string& key, bool fallback) {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    problem(key + ": '" + it->second + "' is not true/false");
    return fallback;
  }

  void problem(const std::string& message) { problems_.push_back(message); }

  // Call last: flags unrecognized keys, then throws if anything went wrong.
  void finish() {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) problems_.push_back("unknown key '" + key + "'");
    }
    if (problems_.empty()) return;
    std::string message = "invalid run config:";
    for (const auto& p : problems_) message += "\n  - " + p;
    throw ConfigError(message);
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
  std::vector<std::string> problems_;
};

std::filesystem::path resolve(const std::filesystem::path& base_dir,
                              const std::string& value) {
  std::filesystem::path p(value);
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal();
}

struct QueryWork {
  const Example* query = nullptr;
  CompletionRequest request;
  std::string hash;
  std::string raw;
};

nlohmann::json tags_to_json(const std::vector<Tag>& tags) {
  nlohmann::json arr = nlohmann::json::array();
  for (Tag t : tags) arr.push_back(std::string(tag_name(t)));
  return arr;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(
    const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + file.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": empty key");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": key '" + key + "' repeated");
    }
    pairs.emplace_back(std::move(key), std::move(value));
  }
  return pairs;
}

RunConfig run_config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    const std::filesystem::path& base_dir) {
  ConfigReader reader(pairs);
  RunConfig config;

  auto parse_field = [&](const std::string& key, auto parser) {
    std::string value = reader.require(key);
    if (value.empty()) return;
    try {
      parser(value);
    } catch (const ConfigError& e) {
      reader.problem(key + ": " + e.what());
    }
  };

  parse_field("task",
              [&](const std::string& v) { config.task = task_kind_from_string(v); });
  parse_field("language", [&](const std::string& v) {
    config.language = LanguageTag::parse(v);
  });
  if (reader.has("mode")) {
    parse_field("mode", [&](const std::string& v) {
      config.mode = prompt_mode_from_string(v);
    });
  }

  {
    std::string v = reader.get("seed", "0");
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      reader.problem("seed: '" + v + "' is not an unsigned integer");
    } else {
      config.seed = seed;
    }
  }

  std::string policy = reader.get("policy", "random-coverage");
  if (policy == "random-coverage") {
    RandomCoverage rc;
    rc.k = static_cast<int>(reader.get_int("k", 3, 1, 1000));
    rc.attempts = static_cast<int>(reader.get_int("attempts", 8, 1, 1000));
    config.policy = rc;
  } else if (policy == "fixed") {
    Fixed fx;
    std::string ids = reader.require("fixed_ids");
    if (!ids.empty()) {
      fx.ids = split_commas(ids);
      for (const auto& id : fx.ids) {
        if (id.empty()) reader.problem("fixed_ids: empty id in list");
      }
    }
    config.policy = fx;
  } else if (policy == "retrieve") {
    Retrieve rt;
    rt.k = static_cast<int>(reader.get_int("k", 3, 1, 1000));
    rt.pool = static_cast<int>(reader.get_int("pool", 10, 1, 10000));
    config.policy = rt;
    if (reader.get("embeddings").empty()) {
      reader.problem("embeddings: required for retrieve policy");
    }
  } else {
    reader.problem("policy: unknown '" + policy +
                   "' (expected random-coverage, fixed or retrieve)");
  }
  try {
    validate_policy(config.policy);
  } catch (const ConfigError& e) {
    reader.problem(std::string("policy: ") + e.what());
  }

  for (auto [key, member] :
       {std::pair<const char*, std::filesystem::path*>{"tables", &config.tables_dir},
        {"demos", &config.demos_file},
        {"queries", &config.queries_file}}) {
    std::string value = reader.require(key);
    if (!value.empty()) *member = resolve(base_dir, value);
  }
  for (auto [key, member] : {std::pair<const char*, std::filesystem::path*>{
                                 "embeddings", &config.embeddings_file},
                             {"templates", &config.templates_dir},
                             {"record", &config.record_file}}) {
    std::string value = reader.get(key);
    if (!value.empty()) *member = resolve(base_dir, value);
  }

  std::string labels = reader.get("labels");
  if (!labels.empty()) {
    config.labels = split_commas(labels);
    std::set<std::string> unique;
    for (const auto& label : config.labels) {
      if (label.empty()) {
        reader.problem("labels: empty label in list");
      } else if (!unique.insert(label).second) {
        reader.problem("labels: '" + label + "' repeated");
      }
    }
  } else if (config.task == TaskKind::Cls) {
    reader.problem("labels: required for cls task");
  }

  config.backend = reader.require("backend");
  if (!config.backend.empty()) {
    if (config.backend.rfind("replay:", 0) == 0) {
      config.backend =
          "replay:" + resolve(base_dir, config.backend.substr(7)).string();
    } else if (config.backend.rfind("live:", 0) != 0) {
      reader.problem("backend: must be live:<url> or replay:<file>");
    }
  }

  if (reader.has("fallback")) {
    try {
      config.fallback = fallback_from_string(reader.get("fallback"));
    } catch (const ConfigError& e) {
      reader.problem(std::string("fallback: ") + e.what());
    }
  }
  config.lowercase = reader.get_bool("lowercase", false);
  config.concurrency = static_cast<int>(reader.get_int("concurrency", 4, 1, 256));
  config.max_new_tokens =
      static_cast<int>(reader.get_int("max_new_tokens", 0, 0, 100000));

  reader.finish();
  return config;
}

std::string snapshot_config(const RunConfig& config) {
  std::ostringstream out;
  out << "task = " << to_string(config.task) << "\n";
  out << "language = " << config.language.str() << "\n";
  out << "mode = " << to_string(config.mode) << "\n";
  out << "seed = " << config.seed << "\n";
  if (const auto* rc = std::get_if<RandomCoverage>(&config.policy)) {
    out << "policy = random-coverage\n";
    out << "k = " << rc->k << "\n";
    out << "attempts = " << rc->attempts << "\n";
  } else if (const auto* fx = std::get_if<Fixed>(&config.policy)) {
    out << "policy = fixed\n";
    out << "fixed_ids = ";
    for (std::size_t i = 0; i < fx->ids.size(); ++i) {
      if (i > 0) out << ",";
      out << fx->ids[i];
    }
    out << "\n";
  } else {
    const auto& rt = std::get<Retrieve>(config.policy);
    out << "policy = retrieve\n";
    out << "k = " << rt.k << "\n";
    out << "pool = " << rt.pool << "\n";
  }
  out << "tables = " << config.tables_dir.string() << "\n";
  out << "demos = " << config.demos_file.string() << "\n";
  out << "queries = " << config.queries_file.string() << "\n";
  if (!config.embeddings_file.empty()) {
    out << "embeddings = " << config.embeddings_file.string() << "\n";
  }
  if (!config.templates_dir.empty()) {
    out << "templates = " << config.templates_dir.string() << "\n";
  }
  if (!config.record_file.empty()) {
    out << "record = " << config.record_file.string() << "\n";
  }
  if (!config.labels.empty()) {
    out << "labels = ";
    for (std::size_t i = 0; i < config.labels.size(); ++i) {
      if (i > 0) out << ",";
      out << config.labels[i];
    }
    out << "\n";
  }
  out << "backend = " << config.backend << "\n";
  out << "fallback = " << to_string(config.fallback) << "\n";
  out << "lowercase = " << (config.lowercase ? "true" : "false") << "\n";
  out << "concurrency = " << config.concurrency << "\n";
  out << "max_new_tokens = " << config.max_new_tokens << "\n";
  return out.str();
}

RunResult run_evaluation(const RunConfig& config,
                         const std::filesystem::path& out_dir) {
  RomanizerConfig romanizer =
      load_tables(config.tables_dir, config.fallback, config.lowercase);
  TemplateSet templates =
      config.templates_dir.empty()
          ? default_templates(config.task, config.labels)
          : load_templates(config.templates_dir, config.task, config.labels);

  auto load = [&](const std::filesystem::path& file) {
    return config.task == TaskKind::SeqLab ? load_seqlab(file)
                                           : load_cls(file, config.labels);
  };
  std::vector<Example> demos = load(config.demos_file);
  std::vector<Example> queries = load(config.queries_file);
  if (demos.empty()) {
    throw ConfigError("no demos in " + config.demos_file.string());
  }
  if (queries.empty()) {
    throw ConfigError("no queries in " + config.queries_file.string());
  }

  std::map<std::string, EmbeddingVector> embeddings;
  if (std::holds_alternative<Retrieve>(config.policy)) {
    if (config.embeddings_file.empty()) {
      throw ConfigError("retrieve policy needs an embeddings file");
    }
    embeddings = load_embeddings(config.embeddings_file);
  }

  // Selection and rendering happen up front, single-threaded, so the
  // request set is fixed before anything runs concurrently.
  std::vector<QueryWork> work(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const Example& query = queries[i];
    auto chosen = select(config.policy, query.id, demos, embeddings, config.seed);
    RenderedPrompt prompt =
        build_prompt(templates, config.mode, chosen, query, romanizer);
    QueryWork& w = work[i];
    w.query = &query;
    w.request.prompt = std::move(prompt.text);
    w.request.temperature = 0.0;
    if (config.max_new_tokens > 0) {
      w.request.max_new_tokens = config.max_new_tokens;
    } else if (config.task == TaskKind::Cls) {
      w.request.max_new_tokens = 16;
    } else {
      w.request.max_new_tokens =
          8 * static_cast<int>(prompt.query_token_count);
    }
    w.request.stop_sequences =
        config.task == TaskKind::Cls ? std::vector<std::string>{"\n"}
                                     : std::vector<std::string>{"\n\n"};
    w.hash = request_hash(w.request);
  }

  std::unique_ptr<CompletionBackend> backend = make_backend(config.backend);
  if (!config.record_file.empty()) {
    backend = std::make_unique<RecordingBackend>(std::move(backend),
                                                 config.record_file);
  }

  std::size_t n_threads = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(config.concurrency, 1)), work.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(work.size());
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      try {
        work[i].raw = backend->complete(work[i].request).text;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<std::size_t> order(work.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return work[a].query->id < work[b].query->id;
  });

  MetricReport report;
  report.task = config.task;
  report.language = config.language;
  report.mode = config.mode;
  report.n_examples = queries.size();

  std::string records;
  if (config.task == TaskKind::SeqLab) {
    std::vector<std::vector<Tag>> gold, pred;
    gold.reserve(order.size());
    pred.reserve(order.size());
    for (std::size_t i : order) {
      const QueryWork& w = work[i];
      gold.push_back(w.query->seqlab().tags);
      pred.push_back(
          parse_seqlab_output(w.raw, w.query->seqlab().tokens.size()));
      nlohmann::json record;
      record["example_id"] = w.query->id;
      record["gold"] = tags_to_json(gold.back());
      record["mode"] = to_string(config.mode);
      record["prediction"] = tags_to_json(pred.back());
      record["prompt_hash"] = w.hash;
      record["raw"] = w.raw;
      records += record.dump();
      records += '\n';
    }
    report.score = 100.0 * token_macro_f1(gold, pred);
    for (const auto& [tag, score] : per_class_scores(gold, pred)) {
      report.per_class.emplace(std::string(tag_name(tag)), score);
    }
  } else {
    std::vector<std::string> gold;
    std::vector<std::optional<std::string>> pred;
    gold.reserve(order.size());
    pred.reserve(order.size());
    for (std::size_t i : order) {
      const QueryWork& w = work[i];
      gold.push_back(w.query->cls().label);
      pred.push_back(parse_cls_output(w.raw, templates.label_verbalizers));
      if (!pred.back()) ++report.n_unparsed;
      nlohmann::json record;
      record["example_id"] = w.query->id;
      record["gold"] = gold.back();
      record["mode"] = to_string(config.mode);
      record["prediction"] =
          pred.back() ? nlohmann::json(*pred.back()) : nlohmann::json(nullptr);
      record["prompt_hash"] = w.hash;
      record["raw"] = w.raw;
      records += record.dump();
      records += '\n';
    }
    report.score = 100.0 * accuracy(gold, pred);
  }

  std::filesystem::create_directories(out_dir);
  RunResult result;
  result.report = report;
  result.records_file = out_dir / "records.jsonl";
  result.metrics_file = out_dir / "metrics.json";
  result.snapshot_file = out_dir / "config.snapshot";

  auto write_file = [](const std::filesystem::path& file,
                       const std::string& content) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + file.string());
    out << content;
  };
  write_file(result.records_file, records);
  write_file(result.metrics_file, to_json_line(report) + "\n");
  write_file(result.snapshot_file, snapshot_config(config));
  return result;
}

}  // namespace xlit
