#include "xlit/prompt_builder.hpp"

#include <fstream>
#include <optional>

#include "xlit/errors.hpp"

namespace xlit {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fill_slots(const std::string& block,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(block.size());
  std::size_t i = 0;
  while (i < block.size()) {
    if (block[i] != '{') {
      out.push_back(block[i]);
      ++i;
      continue;
    }
    std::size_t close = block.find('}', i + 1);
    if (close == std::string::npos) {
      throw ConfigError("unterminated template slot near '" +
                        block.substr(i, 24) + "'");
    }
    std::string name = block.substr(i + 1, close - i - 1);
    auto it = values.find(name);
    if (it == values.end()) {
      throw ConfigError("template slot '{" + name + "}' has no value");
    }
    out += it->second;
    i = close + 1;
  }
  return out;
}

bool has_slot(const std::string& block, std::string_view name) {
  return block.find("{" + std::string(name) + "}") != std::string::npos;
}

std::string seqlab_answer(const SeqLabPayload& payload,
                          const std::vector<std::string>& latn_tokens,
                          PromptMode mode) {
  std::vector<std::string> lines;
  lines.reserve(payload.tokens.size());
  for (std::size_t i = 0; i < payload.tokens.size(); ++i) {
    std::string line;
    switch (mode) {
      case PromptMode::Orig:
        line = payload.tokens[i];
        break;
      case PromptMode::Latn:
        line = latn_tokens[i];
        break;
      case PromptMode::Combined:
        line = payload.tokens[i] + " (" + latn_tokens[i] + ")";
        break;
    }
    line += ": ";
    line += tag_name(payload.tags[i]);
    lines.push_back(std::move(line));
  }
  return join(lines, "\n");
}

struct TemplateFileSections {
  std::optional<std::string> instruction;
  std::optional<std::string> demo;
  std::optional<std::string> query;
};

TemplateFileSections parse_template_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + file.string());

  TemplateFileSections out;
  std::optional<std::string>* current = nullptr;
  std::vector<std::string> buffer;
  auto flush = [&] {
    if (current) *current = join(buffer, "\n");
    buffer.clear();
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[instruction]" || line == "[demo]" || line == "[query]") {
      flush();
      auto* target = line == "[instruction]" ? &out.instruction
                     : line == "[demo]"      ? &out.demo
                                             : &out.query;
      if (target->has_value() || current == target) {
        throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                          ": duplicate " + line + " section");
      }
      current = target;
      continue;
    }
    if (!line.empty() && line.front() == '[' && line.back() == ']') {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": unknown section " + line);
    }
    if (!current) {
      if (line.empty()) continue;
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": text before first section header");
    }
    buffer.push_back(line);
  }
  flush();
  return out;
}

void check_block(const std::string& block, PromptMode mode, const char* which,
                 bool is_demo) {
  auto require = [&](std::string_view slot, bool wanted) {
    bool present = has_slot(block, slot);
    if (wanted && !present) {
      throw ConfigError(to_string(mode) + " " + which + " block missing {" +
                        std::string(slot) + "}");
    }
    if (!wanted && present) {
      throw ConfigError(to_string(mode) + " " + which +
                        " block must not use {" + std::string(slot) + "}");
    }
  };
  require("text_orig", mode != PromptMode::Latn);
  require("text_latn", mode != PromptMode::Orig);
  require("answer", is_demo);
}

}  // namespace

void validate_templates(const TemplateSet& templates) {
  for (PromptMode mode : kAllModes) {
    const auto& mt = templates.for_mode(mode);
    check_block(mt.demo_block, mode, "demo", true);
    check_block(mt.query_block, mode, "query", false);
  }
  if (templates.instruction.empty()) {
    throw ConfigError("empty template instruction");
  }
}

TemplateSet default_templates(TaskKind kind,
                              const std::vector<std::string>& label_set) {
  TemplateSet t;
  t.task_kind = kind;
  auto& orig = t.by_mode[static_cast<std::size_t>(PromptMode::Orig)];
  auto& latn = t.by_mode[static_cast<std::size_t>(PromptMode::Latn)];
  auto& comb = t.by_mode[static_cast<std::size_t>(PromptMode::Combined)];

  if (kind == TaskKind::SeqLab) {
    t.instruction =
        "Label every word with one of: O, B-PER, I-PER, B-ORG, I-ORG, "
        "B-LOC, I-LOC. Answer with one \"word: tag\" line per word.";
    orig = {"Sentence: {text_orig}\nTags:\n{answer}\n\n",
            "Sentence: {text_orig}\nTags:\n"};
    latn = {"Sentence: {text_latn}\nTags:\n{answer}\n\n",
            "Sentence: {text_latn}\nTags:\n"};
    comb = {"Sentence: {text_orig}\nRomanized: {text_latn}\nTags:\n"
            "{answer}\n\n",
            "Sentence: {text_orig}\nRomanized: {text_latn}\nTags:\n"};
  } else {
    if (label_set.empty()) {
      throw ConfigError("classification templates need a label set");
    }
    t.instruction = "Classify the text as one of: " + join(label_set, ", ") +
                    ". Answer with the label only.";
    orig = {"Text: {text_orig}\nLabel: {answer}\n\n",
            "Text: {text_orig}\nLabel:"};
    latn = {"Text: {text_latn}\nLabel: {answer}\n\n",
            "Text: {text_latn}\nLabel:"};
    comb = {"Text: {text_orig}\nRomanized: {text_latn}\nLabel: {answer}\n\n",
            "Text: {text_orig}\nRomanized: {text_latn}\nLabel:"};
    for (const auto& label : label_set) t.label_verbalizers[label] = label;
  }
  validate_templates(t);
  return t;
}

TemplateSet load_templates(const std::filesystem::path& dir, TaskKind kind,
                           const std::vector<std::string>& label_set) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("template directory not found: " + dir.string());
  }
  TemplateSet t = default_templates(kind, label_set);
  std::optional<std::string> instruction;
  std::string instruction_source;
  bool any = false;

  for (PromptMode mode : kAllModes) {
    auto file = dir / (to_string(kind) + "_" + to_string(mode) + ".tmpl");
    if (!std::filesystem::exists(file)) continue;
    any = true;
    auto sections = parse_template_file(file);
    if (sections.instruction) {
      if (instruction && *instruction != *sections.instruction) {
        throw ConfigError("conflicting [instruction] sections in " +
                          instruction_source + " and " + file.string());
      }
      instruction = sections.instruction;
      instruction_source = file.string();
    }
    auto& mt = t.by_mode[static_cast<std::size_t>(mode)];
    if (sections.demo) mt.demo_block = *sections.demo;
    if (sections.query) mt.query_block = *sections.query;
  }

  if (!any) {
    throw ConfigError("no template files for task '" + to_string(kind) +
                      "' in " + dir.string());
  }
  if (instruction) t.instruction = *instruction;
  validate_templates(t);
  return t;
}

Example transliterate_example(const RomanizerConfig& config,
                              const Example& example) {
  Example out = example;
  if (example.is_seqlab()) {
    std::get<SeqLabPayload>(out.payload).tokens =
        romanize_tokens(config, example.seqlab().tokens);
  } else {
    std::get<ClsPayload>(out.payload).text =
        romanize_text(config, example.cls().text);
  }
  return out;
}

RenderedPrompt build_prompt(const TemplateSet& templates, PromptMode mode,
                            const std::vector<Example>& demos,
                            const Example& query,
                            const RomanizerConfig& romanizer) {
  bool want_seqlab = templates.task_kind == TaskKind::SeqLab;
  bool needs_latn = mode != PromptMode::Orig;
  const auto& mt = templates.for_mode(mode);

  auto slot_values = [&](const Example& ex, bool is_demo) {
    if (ex.is_seqlab() != want_seqlab) {
      throw ConfigError("example '" + ex.id + "' does not match template task '" +
                        to_string(templates.task_kind) + "'");
    }
    std::map<std::string, std::string> values;
    if (ex.is_seqlab()) {
      const auto& payload = ex.seqlab();
      std::vector<std::string> latn_tokens;
      if (needs_latn) latn_tokens = romanize_tokens(romanizer, payload.tokens);
      values["text_orig"] = join(payload.tokens, " ");
      if (needs_latn) values["text_latn"] = join(latn_tokens, " ");
      if (is_demo) values["answer"] = seqlab_answer(payload, latn_tokens, mode);
    } else {
      const auto& payload = ex.cls();
      values["text_orig"] = payload.text;
      if (needs_latn) values["text_latn"] = romanize_text(romanizer, payload.text);
      if (is_demo) {
        auto it = templates.label_verbalizers.find(payload.label);
        if (it == templates.label_verbalizers.end()) {
          throw ConfigError("no verbalizer for label '" + payload.label + "'");
        }
        values["answer"] = it->second;
      }
    }
    return values;
  };

  std::string text = templates.instruction + "\n\n";
  for (const Example& demo : demos) {
    text += fill_slots(mt.demo_block, slot_values(demo, true));
  }
  text += fill_slots(mt.query_block, slot_values(query, false));

  RenderedPrompt prompt;
  prompt.text = std::move(text);
  prompt.mode = mode;
  prompt.query_token_count =
      query.is_seqlab() ? query.seqlab().tokens.size() : 0;
  return prompt;
}

}  // namespace xlit
