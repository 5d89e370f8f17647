#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xlit/script.hpp"

namespace xlit {

// A language identifier of the form "lll_Ssss": a three-letter lowercase
// language code joined to the script the text is written in.
class LanguageTag {
 public:
  LanguageTag(std::string language, ScriptTag script);

  // Parses "rus_Cyrl"-style tags. Throws ConfigError on anything else.
  static LanguageTag parse(std::string_view tag);

  const std::string& language() const { return language_; }
  const ScriptTag& script() const { return script_; }
  std::string str() const { return language_ + "_" + script_.code(); }

  friend bool operator==(const LanguageTag& a, const LanguageTag& b) {
    return a.language_ == b.language_ && a.script_ == b.script_;
  }
  friend bool operator<(const LanguageTag& a, const LanguageTag& b) {
    return a.str() < b.str();
  }

 private:
  std::string language_;
  ScriptTag script_;
};

// Tag inventory for sequence labeling: BIO over person, organization and
// location, plus the outside tag.
enum class Tag : std::uint8_t {
  O = 0,
  B_PER,
  I_PER,
  B_ORG,
  I_ORG,
  B_LOC,
  I_LOC,
};

inline constexpr int kTagCount = 7;
inline constexpr Tag kAllTags[] = {Tag::O,     Tag::B_PER, Tag::I_PER,
                                   Tag::B_ORG, Tag::I_ORG, Tag::B_LOC,
                                   Tag::I_LOC};

// Canonical surface form, e.g. "B-PER".
std::string_view tag_name(Tag t);

// Inverse of tag_name. Throws ConfigError naming the offending string.
Tag parse_tag(std::string_view name);

// One labeled sentence: parallel token and tag sequences of equal, nonzero
// length.
struct SeqLabPayload {
  std::vector<std::string> tokens;
  std::vector<Tag> tags;
};

// One labeled text for classification.
struct ClsPayload {
  std::string text;
  std::string label;
};

struct Example {
  std::string id;
  std::variant<SeqLabPayload, ClsPayload> payload;

  bool is_seqlab() const {
    return std::holds_alternative<SeqLabPayload>(payload);
  }
  const SeqLabPayload& seqlab() const {
    return std::get<SeqLabPayload>(payload);
  }
  const ClsPayload& cls() const { return std::get<ClsPayload>(payload); }
};

struct EmbeddingVector {
  std::string example_id;
  std::vector<double> values;
};

// Loads sentences from the token<TAB>tag format, one token per line with
// blank lines separating sentences. Ids are assigned as
// "<file-stem>:<0-based sentence index>". Throws ConfigError on unknown
// tags or malformed lines, citing file, line and sentence index.
std::vector<Example> load_seqlab(const std::filesystem::path& file);

// Loads id<TAB>label<TAB>text records. The text field may itself contain
// tabs. Labels must belong to label_set; ids must be unique and the text
// nonempty. An empty id field gets "<file-stem>:<0-based record index>".
std::vector<Example> load_cls(const std::filesystem::path& file,
                              const std::vector<std::string>& label_set);

// Loads id<TAB>v1,v2,...,vd lines into a map keyed by example id. All
// vectors must share one dimensionality, contain at least one nonzero
// component, and have unique ids. An empty file yields an empty map.
std::map<std::string, EmbeddingVector> load_embeddings(
    const std::filesystem::path& file);

// Inverses of the loaders, for round-tripping corpora through disk.
void write_seqlab(const std::filesystem::path& file,
                  const std::vector<Example>& examples);
void write_cls(const std::filesystem::path& file,
               const std::vector<Example>& examples);

}  // namespace xlit
