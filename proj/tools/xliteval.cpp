#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xlit/errors.hpp"
#include "xlit/report.hpp"
#include "xlit/romanizer.hpp"
#include "xlit/runner.hpp"

namespace {

struct RomanizeArgs {
  std::string tables;
  std::string input = "-";
  std::string mode = "text";
  std::string fallback = "decompose-strip";
  bool lowercase = false;
};

struct RunArgs {
  std::string config;
  std::string out;
  std::string mode;
  std::string seed;
  std::string backend;
  std::string tables;
};

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string grouping = "all";
  std::string format = "tsv";
  std::string out;
};

xlit::FallbackPolicy fallback_from_flag(const std::string& name) {
  if (name == "passthrough") return xlit::FallbackPolicy::Passthrough;
  if (name == "drop") return xlit::FallbackPolicy::Drop;
  return xlit::FallbackPolicy::DecomposeStrip;
}

std::vector<std::string> whitespace_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

int cmd_romanize(const RomanizeArgs& args) {
  xlit::RomanizerConfig config = xlit::load_tables(
      args.tables, fallback_from_flag(args.fallback), args.lowercase);

  std::ifstream file;
  if (args.input != "-") {
    file.open(args.input, std::ios::binary);
    if (!file) throw xlit::ConfigError("cannot open " + args.input);
  }
  std::istream& in = args.input == "-" ? std::cin : file;

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (args.mode == "tokens") {
      auto romanized = xlit::romanize_tokens(config, whitespace_tokens(line));
      for (std::size_t i = 0; i < romanized.size(); ++i) {
        if (i > 0) std::cout << ' ';
        std::cout << romanized[i];
      }
      std::cout << '\n';
    } else {
      std::cout << xlit::romanize_text(config, line) << '\n';
    }
  }
  return 0;
}

int cmd_run(const RunArgs& args) {
  auto pairs = xlit::parse_key_values(args.config);

  auto resolve_cwd = [](const std::string& value) {
    return std::filesystem::absolute(value).lexically_normal().string();
  };
  if (!args.mode.empty()) pairs.emplace_back("mode", args.mode);
  if (!args.seed.empty()) pairs.emplace_back("seed", args.seed);
  if (!args.tables.empty()) pairs.emplace_back("tables", resolve_cwd(args.tables));
  if (!args.backend.empty()) {
    std::string backend = args.backend;
    if (backend.rfind("replay:", 0) == 0) {
      backend = "replay:" + resolve_cwd(backend.substr(7));
    }
    pairs.emplace_back("backend", backend);
  }

  auto base_dir = std::filesystem::absolute(args.config).parent_path();
  xlit::RunConfig config = xlit::run_config_from_pairs(pairs, base_dir);
  xlit::RunResult result = xlit::run_evaluation(config, args.out);

  std::cout << config.language.str() << " " << xlit::to_string(config.mode)
            << " score " << result.report.score << " ("
            << result.report.n_examples << " examples, "
            << result.report.n_unparsed << " unparsed)\n";
  std::cout << "results in " << std::filesystem::absolute(args.out).string()
            << "\n";
  return 0;
}

int cmd_report(const ReportArgs& args) {
  std::vector<std::filesystem::path> paths(args.inputs.begin(),
                                           args.inputs.end());
  auto reports = xlit::load_metric_reports(paths);
  auto rows =
      xlit::aggregate(reports, xlit::grouping_from_string(args.grouping));
  std::string document = xlit::render_report(
      rows, reports, xlit::report_format_from_string(args.format));

  if (args.out.empty()) {
    std::cout << document;
  } else {
    std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
    if (!out) throw xlit::ConfigError("cannot write " + args.out);
    out << document;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate transliteration-augmented in-context learning"};
  app.require_subcommand(1);

  RomanizeArgs romanize_args;
  auto* romanize = app.add_subcommand("romanize", "Romanize text line by line");
  romanize->add_option("--tables", romanize_args.tables, "Mapping table directory")
      ->required();
  romanize->add_option("--input", romanize_args.input, "Input file, - for stdin");
  romanize->add_option("--mode", romanize_args.mode, "text or tokens")
      ->check(CLI::IsMember({"text", "tokens"}));
  romanize
      ->add_option("--fallback", romanize_args.fallback,
                   "Unmapped codepoint handling")
      ->check(CLI::IsMember({"decompose-strip", "passthrough", "drop"}));
  romanize->add_flag("--lowercase", romanize_args.lowercase,
                     "Lowercase the output");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one evaluation");
  run->add_option("--config", run_args.config, "Run config file")->required();
  run->add_option("--out", run_args.out, "Results directory")->required();
  run->add_option("--mode", run_args.mode, "Override prompt mode")
      ->check(CLI::IsMember({"orig", "latn", "combined"}));
  run->add_option("--seed", run_args.seed, "Override seed");
  run->add_option("--backend", run_args.backend,
                  "Override backend (live:<url> or replay:<file>)");
  run->add_option("--tables", run_args.tables, "Override table directory");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Aggregate metric reports");
  report
      ->add_option("inputs", report_args.inputs,
                   "Run directories or report .jsonl files")
      ->required();
  report->add_option("--grouping", report_args.grouping, "all or script")
      ->check(CLI::IsMember({"all", "script"}));
  report->add_option("--format", report_args.format, "tsv, jsonl or md")
      ->check(CLI::IsMember({"tsv", "jsonl", "md"}));
  report->add_option("--out", report_args.out, "Write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (romanize->parsed()) return cmd_romanize(romanize_args);
    if (run->parsed()) return cmd_run(run_args);
    return cmd_report(report_args);
  } catch (const xlit::BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const xlit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const xlit::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
