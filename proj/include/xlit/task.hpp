#pragma once

#include <string>
#include <string_view>

namespace xlit {

// The two task shapes the pipeline evaluates.
enum class TaskKind { SeqLab, Cls };

// Which script representation a prompt carries: the original text, its
// Latin transliteration, or both.
enum class PromptMode { Orig, Latn, Combined };

inline constexpr PromptMode kAllModes[] = {PromptMode::Orig, PromptMode::Latn,
                                           PromptMode::Combined};

std::string to_string(TaskKind k);
std::string to_string(PromptMode m);

// Throw ConfigError on unknown names. Accepted spellings are the lowercase
// forms used in config files and CLI flags: "seqlab"/"cls",
// "orig"/"latn"/"combined".
TaskKind task_kind_from_string(std::string_view s);
PromptMode prompt_mode_from_string(std::string_view s);

}  // namespace xlit
