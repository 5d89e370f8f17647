// Acceptance gate for the toolkit: six behavioral contracts checked end to
// end, one PASS/FAIL line each, nonzero exit if anything fails. Every check
// carries its own runtime budget so regressions in speed fail loudly too.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_util.hpp"
#include "xlit/corpus.hpp"
#include "xlit/demo_selector.hpp"
#include "xlit/llm_client.hpp"
#include "xlit/parse_metrics.hpp"
#include "xlit/prompt_builder.hpp"
#include "xlit/report.hpp"
#include "xlit/romanizer.hpp"
#include "xlit/runner.hpp"

using namespace xlit;
using test_util::TempDir;
using test_util::read_file;
using test_util::write_file;

namespace {

const std::filesystem::path kSourceDir = XLIT_SOURCE_DIR;

[[noreturn]] void fail(const std::string& reason) {
  throw std::runtime_error(reason);
}

void expect(bool ok, const std::string& reason) {
  if (!ok) fail(reason);
}

std::string fmt(double v, int decimals = 1) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Aggregating the bundled per-language NER scores reproduces the
//    model-level means, one decimal each, within +/-0.1.

std::string check_aggregation() {
  struct Block {
    const char* file;
    double orig, latn, combined;
  };
  const Block blocks[] = {
      {"bloom7b.jsonl", 65.6, 66.7, 70.0},
      {"bloom560m.jsonl", 52.9, 56.7, 56.1},
  };
  for (const Block& block : blocks) {
    const auto path = kSourceDir / "data" / "fixtures" / "ner_scores" / block.file;
    const std::vector<MetricReport> reports = load_metric_reports({path});
    const std::vector<AggregateRow> rows = aggregate(reports, Grouping::AllLanguages);
    expect(rows.size() == 3, std::string(block.file) + ": expected 3 mode rows");
    const double want[] = {block.orig, block.latn, block.combined};
    for (std::size_t i = 0; i < 3; ++i) {
      expect(rows[i].group == "all", "unexpected group " + rows[i].group);
      expect(rows[i].n_languages == 62,
             std::string(block.file) + ": expected 62 languages, got " +
                 std::to_string(rows[i].n_languages));
      const double got = rows[i].mean_score;
      if (std::fabs(got - want[i]) > 0.1) {
        fail(std::string(block.file) + " " + to_string(rows[i].mode) + " mean " +
             fmt(got, 4) + " is not within 0.1 of " + fmt(want[i]));
      }
    }
  }
  return "bloom7b 65.6/66.7/70.0 and bloom560m 52.9/56.7/56.1 reproduced "
         "within 0.1 across 62 languages each";
}

// ---------------------------------------------------------------------------
// 2. Romanizer invariants over generated strings: oracle equivalence, ASCII
//    closure, idempotence and token-count preservation.

// Independent flat reading of the rule files: single-codepoint any-context
// rules only, with every codepoint that any multi-codepoint or contextual or
// conflicting rule touches excluded from sampling.
struct TableOracle {
  std::string name;
  std::vector<std::string> pool;                // sampleable source codepoints
  std::map<std::string, std::string> mapping;   // source -> target
};

std::size_t codepoint_count(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string first_codepoint(const std::string& s) {
  std::size_t len = 1;
  while (len < s.size() && ((static_cast<unsigned char>(s[len]) & 0xC0) == 0x80)) {
    ++len;
  }
  return s.substr(0, len);
}

std::vector<TableOracle> read_table_oracles(const std::filesystem::path& dir) {
  struct RawFile {
    std::string name;
    std::vector<std::pair<std::string, std::string>> singles;
  };
  std::vector<RawFile> files;
  std::set<std::string> tainted;
  std::map<std::string, std::set<std::string>> targets_of;

  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".tsv") continue;
    RawFile raw;
    raw.name = entry.path().stem().string();
    std::ifstream in(entry.path());
    expect(static_cast<bool>(in), "cannot open " + entry.path().string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> fields;
      std::size_t start = 0;
      while (true) {
        std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      expect(fields.size() == 2 || fields.size() == 3,
             entry.path().string() + ": unexpected field count");
      const std::string& source = fields[0];
      const bool contextual = fields.size() == 3 && !fields[2].empty();
      if (codepoint_count(source) > 1 || contextual) {
        tainted.insert(first_codepoint(source));
        if (contextual) tainted.insert(source);
        continue;
      }
      targets_of[source].insert(fields[1]);
      raw.singles.emplace_back(source, fields[1]);
    }
    files.push_back(std::move(raw));
  }
  expect(!files.empty(), "no rule tables found in " + dir.string());

  for (const auto& [source, targets] : targets_of) {
    if (targets.size() > 1) tainted.insert(source);
  }

  std::vector<TableOracle> oracles;
  for (RawFile& raw : files) {
    TableOracle oracle;
    oracle.name = raw.name;
    for (auto& [source, target] : raw.singles) {
      if (tainted.count(source)) continue;
      if (!oracle.mapping.count(source)) {
        oracle.mapping[source] = target;
        oracle.pool.push_back(source);
      }
    }
    expect(!oracle.pool.empty(), raw.name + ": no sampleable codepoints");
    oracles.push_back(std::move(oracle));
  }
  return oracles;
}

std::string check_romanizer_invariants() {
  const auto tables_dir = kSourceDir / "data" / "tables";
  const RomanizerConfig config = load_tables(tables_dir);
  const std::vector<TableOracle> oracles = read_table_oracles(tables_dir);

  std::mt19937_64 rng(20260816);
  constexpr int kStringsPerTable = 10000;
  std::size_t checked = 0;

  for (const TableOracle& oracle : oracles) {
    std::uniform_int_distribution<std::size_t> pick(0, oracle.pool.size() - 1);
    std::uniform_int_distribution<int> length(1, 24);
    for (int i = 0; i < kStringsPerTable; ++i) {
      const int n = length(rng);
      std::string input;
      std::string expected;
      std::vector<std::string> tokens;
      std::string token;
      for (int j = 0; j < n; ++j) {
        const std::string& cp = oracle.pool[pick(rng)];
        input += cp;
        expected += oracle.mapping.at(cp);
        token += cp;
        if (j + 1 == n || (rng() % 4 == 0)) {
          tokens.push_back(token);
          token.clear();
        }
      }
      const std::string once = romanize_text(config, input);
      if (once != expected) {
        fail(oracle.name + ": '" + input + "' romanized to '" + once +
             "', oracle says '" + expected + "'");
      }
      if (romanize_text(config, once) != once) {
        fail(oracle.name + ": output '" + once + "' is not a fixed point");
      }
      if (romanize_tokens(config, tokens).size() != tokens.size()) {
        fail(oracle.name + ": token count changed for '" + input + "'");
      }
      ++checked;
    }
  }

  std::uniform_int_distribution<int> ascii(0x20, 0x7E);
  std::uniform_int_distribution<int> ascii_len(0, 40);
  for (int i = 0; i < kStringsPerTable; ++i) {
    std::string s;
    const int n = ascii_len(rng);
    for (int j = 0; j < n; ++j) s.push_back(static_cast<char>(ascii(rng)));
    if (romanize_text(config, s) != s) {
      fail("ASCII string '" + s + "' did not pass through unchanged");
    }
    ++checked;
  }

  return std::to_string(checked) + " strings over " +
         std::to_string(oracles.size()) +
         " script tables: oracle match, fixed point, token counts, ASCII closure";
}

// ---------------------------------------------------------------------------
// 3. Retrieval selection always lands inside the exact top-10 by cosine
//    similarity and repeats byte-identically.

std::string check_retrieval_oracle() {
  std::mt19937_64 rng(7110);
  std::uniform_int_distribution<int> n_dist(5, 50);
  std::uniform_int_distribution<int> dim_dist(2, 16);
  std::uniform_real_distribution<double> comp(-1.0, 1.0);

  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_dist(rng);
    const int dims = dim_dist(rng);
    std::vector<Example> candidates;
    std::map<std::string, EmbeddingVector> embeddings;
    auto random_vector = [&](const std::string& id) {
      EmbeddingVector v{id, {}};
      double norm = 0.0;
      for (int d = 0; d < dims; ++d) {
        v.values.push_back(comp(rng));
        norm += v.values.back() * v.values.back();
      }
      if (norm == 0.0) v.values[0] = 0.5;
      return v;
    };
    for (int i = 0; i < n; ++i) {
      char id[16];
      std::snprintf(id, sizeof(id), "c%02d", i);
      candidates.push_back(Example{id, ClsPayload{"text", "x"}});
      embeddings[id] = random_vector(id);
    }
    embeddings["query"] = random_vector("query");
    const Example query{"query", ClsPayload{"q", "x"}};

    const Retrieve policy{3, 10};
    const auto picked =
        select(policy, query.id, candidates, embeddings, 1000 + trial);
    const auto again =
        select(policy, query.id, candidates, embeddings, 1000 + trial);
    expect(picked.size() == 3, "expected 3 picks");
    for (std::size_t i = 0; i < picked.size(); ++i) {
      expect(picked[i].id == again[i].id, "rerun differed at trial " +
                                              std::to_string(trial));
    }

    std::vector<std::pair<double, std::string>> order;
    for (const Example& c : candidates) {
      order.emplace_back(cosine_similarity(embeddings.at("query"),
                                           embeddings.at(c.id)),
                         c.id);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::set<std::string> top10;
    for (std::size_t i = 0; i < order.size() && i < 10; ++i) {
      top10.insert(order[i].second);
    }
    for (const Example& p : picked) {
      if (!top10.count(p.id)) {
        fail("trial " + std::to_string(trial) + ": picked '" + p.id +
             "' outside the exact top-10");
      }
    }
  }
  return "100 random corpora: picks subset of exact top-10, reruns identical";
}

// ---------------------------------------------------------------------------
// 4. Macro-F1 agrees with an independent confusion-matrix brute force.

double brute_force_macro_f1(const std::vector<std::vector<Tag>>& gold,
                            const std::vector<std::vector<Tag>>& pred) {
  double tp[kTagCount] = {0}, fp[kTagCount] = {0}, fn[kTagCount] = {0};
  for (std::size_t s = 0; s < gold.size(); ++s) {
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const int g = static_cast<int>(gold[s][i]);
      const int p = static_cast<int>(pred[s][i]);
      if (g == p) {
        tp[g] += 1;
      } else {
        fn[g] += 1;
        fp[p] += 1;
      }
    }
  }
  double sum = 0.0;
  int classes = 0;
  for (int c = 0; c < kTagCount; ++c) {
    if (tp[c] + fp[c] + fn[c] == 0) continue;
    const double precision = tp[c] + fp[c] > 0 ? tp[c] / (tp[c] + fp[c]) : 0.0;
    const double recall = tp[c] + fn[c] > 0 ? tp[c] / (tp[c] + fn[c]) : 0.0;
    const double f1 =
        precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    sum += f1;
    ++classes;
  }
  return classes == 0 ? 0.0 : sum / classes;
}

std::string check_metric_oracle() {
  const std::vector<std::vector<Tag>> hand_gold{{Tag::B_PER, Tag::O, Tag::O}};
  const std::vector<std::vector<Tag>> hand_pred{{Tag::B_PER, Tag::B_PER, Tag::O}};
  const double hand = token_macro_f1(hand_gold, hand_pred);
  if (std::fabs(hand - 0.6667) > 1e-4) {
    fail("hand-computed case returned " + fmt(hand, 6) + ", expected 0.6667");
  }

  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> n_sent(1, 4);
  std::uniform_int_distribution<int> n_tok(1, 8);
  std::uniform_int_distribution<int> tag(0, kTagCount - 1);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<Tag>> gold, pred;
    const int sentences = n_sent(rng);
    for (int s = 0; s < sentences; ++s) {
      const int len = n_tok(rng);
      std::vector<Tag> g, p;
      for (int i = 0; i < len; ++i) {
        g.push_back(static_cast<Tag>(tag(rng)));
        p.push_back(static_cast<Tag>(tag(rng)));
      }
      gold.push_back(std::move(g));
      pred.push_back(std::move(p));
    }
    const double lib = token_macro_f1(gold, pred);
    const double ref = brute_force_macro_f1(gold, pred);
    worst = std::max(worst, std::fabs(lib - ref));
    if (std::fabs(lib - ref) > 1e-12) {
      fail("trial " + std::to_string(trial) + ": " + fmt(lib, 15) + " vs " +
           fmt(ref, 15));
    }
  }
  return "hand case 0.6667 and 1000 random instances within 1e-12 "
         "(worst gap " + fmt(worst, 15) + ")";
}

// ---------------------------------------------------------------------------
// 5. End-to-end replay determinism: 3 languages x 3 modes x 4 query examples,
//    run twice from a gold-echo cassette.

std::string check_replay_determinism() {
  TempDir tmp;
  const auto fixture_dir = kSourceDir / "data" / "fixtures" / "e2e";
  const RomanizerConfig romanizer = load_tables(kSourceDir / "data" / "tables");
  const TemplateSet templates = default_templates(TaskKind::SeqLab);
  int runs = 0;

  for (const char* lang : {"rus_Cyrl", "ell_Grek", "heb_Hebr"}) {
    const auto demos_file = fixture_dir / (std::string(lang) + ".demos.tsv");
    const auto queries_file = fixture_dir / (std::string(lang) + ".queries.tsv");
    const std::vector<Example> demos = load_seqlab(demos_file);
    const std::vector<Example> queries = load_seqlab(queries_file);
    expect(queries.size() == 4, std::string(lang) + ": expected 4 queries");

    for (PromptMode mode : kAllModes) {
      RunConfig config;
      config.task = TaskKind::SeqLab;
      config.language = LanguageTag::parse(lang);
      config.mode = mode;
      config.seed = 7;
      config.policy = RandomCoverage{2, 8};
      config.tables_dir = kSourceDir / "data" / "tables";
      config.demos_file = demos_file;
      config.queries_file = queries_file;

      const std::string stem = std::string(lang) + "_" + to_string(mode);
      const auto cassette = tmp.path / (stem + ".jsonl");
      std::string tape;
      for (const Example& query : queries) {
        const auto chosen = select(config.policy, query.id, demos, {}, config.seed);
        const RenderedPrompt prompt =
            build_prompt(templates, mode, chosen, query, romanizer);
        CompletionRequest request;
        request.prompt = prompt.text;
        request.max_new_tokens = 8 * static_cast<int>(prompt.query_token_count);
        request.stop_sequences = {"\n\n"};
        std::string answer;
        const auto& payload = query.seqlab();
        for (std::size_t i = 0; i < payload.tokens.size(); ++i) {
          answer += payload.tokens[i] + ": " +
                    std::string(tag_name(payload.tags[i])) + "\n";
        }
        tape += cassette_line(request_hash(request), request, answer) + "\n";
      }
      write_file(cassette, tape);
      config.backend = "replay:" + cassette.string();

      const RunResult first = run_evaluation(config, tmp.path / (stem + "_a"));
      const RunResult second = run_evaluation(config, tmp.path / (stem + "_b"));

      const std::string records = read_file(first.records_file);
      expect(records == read_file(second.records_file),
             stem + ": records.jsonl differs between invocations");
      expect(read_file(first.metrics_file) == read_file(second.metrics_file),
             stem + ": metrics.json differs between invocations");

      expect(std::fabs(first.report.score - 100.0) < 1e-9,
             stem + ": gold echo scored " + fmt(first.report.score, 4));
      expect(first.report.n_unparsed == 0, stem + ": unparsed responses");
      for (const auto& [name, cls] : first.report.per_class) {
        expect(std::fabs(cls.f1 - 1.0) < 1e-12, stem + ": class " + name +
                                                    " f1 " + fmt(cls.f1, 6));
      }

      // Token-level accuracy from the records themselves.
      std::istringstream lines(records);
      std::string line;
      std::size_t n_records = 0;
      while (std::getline(lines, line)) {
        const nlohmann::json record = nlohmann::json::parse(line);
        expect(record.at("gold") == record.at("prediction"),
               stem + ": prediction differs from gold in " +
                   record.at("example_id").get<std::string>());
        ++n_records;
      }
      expect(n_records == 4, stem + ": expected 4 records");
      runs += 2;
    }
  }
  return std::to_string(runs) +
         " runs (3 languages x 3 modes, twice each): byte-identical outputs, "
         "every gold echo at accuracy 100.0 and macro-F1 1.0";
}

// ---------------------------------------------------------------------------
// 6. Rendered prompts match the checked-in goldens byte for byte; Latn mode
//    stays pure ASCII; combined prompts are never shorter than either half.

std::string check_prompt_goldens() {
  const RomanizerConfig romanizer = load_tables(kSourceDir / "data" / "tables");
  const auto golden_dir = kSourceDir / "data" / "fixtures" / "prompts";

  auto seq = [](std::string id, std::vector<std::string> toks,
                std::vector<Tag> tags) {
    return Example{std::move(id), SeqLabPayload{std::move(toks), std::move(tags)}};
  };
  const std::vector<Example> seq_demos{
      seq("d0", {"Анна", "работает", "в", "Москве"},
          {Tag::B_PER, Tag::O, Tag::O, Tag::B_LOC}),
      seq("d1", {"Газпром", "открыл", "офис"}, {Tag::B_ORG, Tag::O, Tag::O}),
  };
  const Example seq_query = seq("q0", {"Сергей", "уехал", "в", "Киев"},
                                {Tag::B_PER, Tag::O, Tag::O, Tag::B_LOC});
  const std::vector<Example> cls_demos{
      Example{"d0", ClsPayload{"καλό φαγητό", "pos"}},
      Example{"d1", ClsPayload{"κακή ιδέα", "neg"}},
  };
  const Example cls_query{"q0", ClsPayload{"υπέροχη μέρα", "pos"}};

  const TemplateSet seq_templates = default_templates(TaskKind::SeqLab);
  const TemplateSet cls_templates = default_templates(TaskKind::Cls, {"pos", "neg"});

  int matched = 0;
  for (const char* shape : {"seqlab", "cls"}) {
    const bool is_seq = std::string(shape) == "seqlab";
    std::map<PromptMode, std::string> rendered;
    for (PromptMode mode : kAllModes) {
      const RenderedPrompt prompt =
          is_seq ? build_prompt(seq_templates, mode, seq_demos, seq_query, romanizer)
                 : build_prompt(cls_templates, mode, cls_demos, cls_query, romanizer);
      rendered[mode] = prompt.text;

      const auto golden_file =
          golden_dir / (std::string(shape) + "_" + to_string(mode) + ".golden.txt");
      const std::string golden = read_file(golden_file);
      if (prompt.text != golden) {
        fail(golden_file.filename().string() + " does not match the rendered prompt");
      }
      ++matched;
    }
    for (unsigned char c : rendered[PromptMode::Latn]) {
      if (c >= 0x80) {
        fail(std::string(shape) + ": Latn prompt contains a non-ASCII byte");
      }
    }
    const std::size_t combined = rendered[PromptMode::Combined].size();
    expect(combined >= rendered[PromptMode::Orig].size() &&
               combined >= rendered[PromptMode::Latn].size(),
           std::string(shape) + ": combined prompt shorter than a single-script one");
  }
  return std::to_string(matched) +
         " goldens byte-exact; Latn pure ASCII; combined >= max(orig, latn)";
}

// ---------------------------------------------------------------------------

struct Check {
  const char* name;
  double budget_seconds;
  std::function<std::string()> run;
};

}  // namespace

int main() {
  const Check checks[] = {
      {"score aggregation reproduces model means", 1.0, check_aggregation},
      {"romanizer invariant suite", 30.0, check_romanizer_invariants},
      {"retrieval matches exact top-10 oracle", 10.0, check_retrieval_oracle},
      {"macro-F1 matches confusion-matrix oracle", 10.0, check_metric_oracle},
      {"end-to-end replay determinism", 5.0, check_replay_determinism},
      {"prompt golden suite", 5.0, check_prompt_goldens},
  };

  bool all_ok = true;
  int index = 0;
  for (const Check& check : checks) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = check.run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && elapsed > check.budget_seconds) {
      ok = false;
      detail = "over budget: " + fmt(elapsed, 2) + "s > " +
               fmt(check.budget_seconds, 0) + "s";
    }
    std::printf("%s [%d/6] %s: %s (%.2fs, limit %.0fs)\n",
                ok ? "PASS" : "FAIL", index, check.name, detail.c_str(),
                elapsed, check.budget_seconds);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
