#include "xlit/task.hpp"

#include "xlit/errors.hpp"

namespace xlit {

std::string to_string(TaskKind k) {
  return k == TaskKind::SeqLab ? "seqlab" : "cls";
}

std::string to_string(PromptMode m) {
  switch (m) {
    case PromptMode::Orig:
      return "orig";
    case PromptMode::Latn:
      return "latn";
    case PromptMode::Combined:
      return "combined";
  }
  return "orig";
}

TaskKind task_kind_from_string(std::string_view s) {
  if (s == "seqlab") return TaskKind::SeqLab;
  if (s == "cls") return TaskKind::Cls;
  throw ConfigError("unknown task kind '" + std::string(s) +
                    "' (expected seqlab or cls)");
}

PromptMode prompt_mode_from_string(std::string_view s) {
  if (s == "orig") return PromptMode::Orig;
  if (s == "latn") return PromptMode::Latn;
  if (s == "combined") return PromptMode::Combined;
  throw ConfigError("unknown prompt mode '" + std::string(s) +
                    "' (expected orig, latn or combined)");
}

}  // namespace xlit
