#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "xlit/corpus.hpp"
#include "xlit/romanizer.hpp"
#include "xlit/task.hpp"

namespace xlit {

// Format strings for one prompt mode. Slots are written {text_orig},
// {text_latn} and {answer}; which text slots a block must use is fixed by
// the mode (orig-only, latn-only, or both for combined), the demo block
// must use {answer} and the query block must not.
struct ModeTemplates {
  std::string demo_block;
  std::string query_block;
};

struct TemplateSet {
  TaskKind task_kind = TaskKind::SeqLab;
  std::string instruction;
  std::array<ModeTemplates, 3> by_mode;
  std::map<std::string, std::string> label_verbalizers;

  const ModeTemplates& for_mode(PromptMode m) const {
    return by_mode[static_cast<std::size_t>(m)];
  }
};

// Enforces the slot discipline above for every mode. Throws ConfigError
// naming the mode and slot on violation.
void validate_templates(const TemplateSet& templates);

// Built-in templates. Classification templates need the label set: the
// instruction enumerates it and each label verbalizes as itself.
TemplateSet default_templates(TaskKind kind,
                              const std::vector<std::string>& label_set = {});

// Applies override files named "<task>_<mode>.tmpl" (e.g. "cls_latn.tmpl")
// from dir on top of the defaults. A file holds [instruction], [demo] and
// [query] sections; each section present replaces that piece, sections kept
// out fall back to the default. Section content is the lines between
// headers joined with newlines, so a demo block ending in a blank line is
// written as an empty line before the next header. The instruction is
// shared across modes; files that disagree on it are an error, as is a
// directory containing no matching files.
TemplateSet load_templates(const std::filesystem::path& dir, TaskKind kind,
                           const std::vector<std::string>& label_set = {});

struct RenderedPrompt {
  std::string text;
  PromptMode mode = PromptMode::Orig;
  // Token count of the query sentence for sequence labeling, 0 otherwise.
  std::size_t query_token_count = 0;
};

// Romanizes an example's text (tokens for sequence labeling, the text field
// for classification), leaving id and labels untouched.
Example transliterate_example(const RomanizerConfig& config,
                              const Example& example);

// Renders instruction, demo blocks and the query block into one prompt.
// Demos and query must match the template task kind. Demo answers are the
// gold labels: verbalized labels for classification, "token: TAG" lines for
// sequence labeling ("token (romanized): TAG" in combined mode).
RenderedPrompt build_prompt(const TemplateSet& templates, PromptMode mode,
                            const std::vector<Example>& demos,
                            const Example& query,
                            const RomanizerConfig& romanizer);

}  // namespace xlit
