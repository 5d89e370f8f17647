#include "xlit/corpus.hpp"

#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "xlit/errors.hpp"

using namespace xlit;
using test_util::TempDir;
using test_util::write_file;

namespace {

bool examples_equal(const Example& a, const Example& b) {
  if (a.id != b.id || a.is_seqlab() != b.is_seqlab()) return false;
  if (a.is_seqlab()) {
    return a.seqlab().tokens == b.seqlab().tokens &&
           a.seqlab().tags == b.seqlab().tags;
  }
  return a.cls().text == b.cls().text && a.cls().label == b.cls().label;
}

}  // namespace

TEST_CASE("LanguageTag parses and formats lll_Ssss") {
  LanguageTag tag = LanguageTag::parse("ben_Beng");
  CHECK(tag.language() == "ben");
  CHECK(tag.script().code() == "Beng");
  CHECK(tag.str() == "ben_Beng");
}

TEST_CASE("LanguageTag parse/format round-trips") {
  for (const char* text : {"rus_Cyrl", "ell_Grek", "heb_Hebr", "jpn_Jpan",
                           "kor_Hang", "div_Thaa", "und_Zyyy"}) {
    LanguageTag tag = LanguageTag::parse(text);
    CHECK(tag.str() == text);
    CHECK(LanguageTag::parse(tag.str()) == tag);
  }
}

TEST_CASE("LanguageTag rejects malformed tags") {
  CHECK_THROWS_AS(LanguageTag::parse("bengali"), ConfigError);
  CHECK_THROWS_AS(LanguageTag::parse("BEN_Beng"), ConfigError);
  CHECK_THROWS_AS(LanguageTag::parse("be_Beng"), ConfigError);
  CHECK_THROWS_AS(LanguageTag::parse("ben_beng"), ConfigError);
  CHECK_THROWS_AS(LanguageTag::parse("ben_Beng_x"), ConfigError);
  CHECK_THROWS_AS(LanguageTag::parse(""), ConfigError);
}

TEST_CASE("tag names round-trip over the closed 7-tag set") {
  int count = 0;
  for (Tag t : kAllTags) {
    CHECK(parse_tag(tag_name(t)) == t);
    ++count;
  }
  CHECK(count == kTagCount);
  CHECK(kTagCount == 7);
}

TEST_CASE("parse_tag names the offending tag") {
  try {
    parse_tag("B-MISC");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("B-MISC") != std::string::npos);
  }
}

TEST_CASE("load_seqlab reads sentences separated by blank lines") {
  TempDir dir;
  auto file = dir.path / "train.tsv";
  write_file(file,
             "Старобешевский\tB-LOC\nрайон\tI-LOC\n\n"
             "Он\tO\nработал\tO\nв\tO\nДонецке\tB-LOC\n");
  auto examples = load_seqlab(file);
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].id == "train:0");
  CHECK(examples[1].id == "train:1");
  CHECK(examples[0].seqlab().tokens ==
        std::vector<std::string>{"Старобешевский", "район"});
  CHECK(examples[0].seqlab().tags == std::vector<Tag>{Tag::B_LOC, Tag::I_LOC});
  CHECK(examples[1].seqlab().tokens.size() == 4);
  CHECK(examples[1].seqlab().tags ==
        std::vector<Tag>{Tag::O, Tag::O, Tag::O, Tag::B_LOC});
}

TEST_CASE("load_seqlab handles CRLF and repeated blank lines") {
  TempDir dir;
  auto file = dir.path / "x.tsv";
  write_file(file, "a\tO\r\n\r\n\r\n\r\nb\tB-PER\r\n");
  auto examples = load_seqlab(file);
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].seqlab().tokens == std::vector<std::string>{"a"});
  CHECK(examples[1].seqlab().tags == std::vector<Tag>{Tag::B_PER});
}

TEST_CASE("load_seqlab of an empty file yields no examples") {
  TempDir dir;
  auto file = dir.path / "empty.tsv";
  write_file(file, "");
  CHECK(load_seqlab(file).empty());
}

TEST_CASE("load_seqlab rejects unknown tags, naming tag, file and line") {
  TempDir dir;
  auto file = dir.path / "bad.tsv";
  write_file(file, "ok\tO\n\nw\tB-MISC\n");
  try {
    load_seqlab(file);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string message = e.what();
    CHECK(message.find("B-MISC") != std::string::npos);
    CHECK(message.find("bad.tsv:3") != std::string::npos);
    CHECK(message.find("sentence 1") != std::string::npos);
  }
}

TEST_CASE("load_seqlab rejects a token line without a tag") {
  TempDir dir;
  auto file = dir.path / "short.tsv";
  write_file(file, "word\n");
  try {
    load_seqlab(file);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string message = e.what();
    CHECK(message.find("short.tsv:1") != std::string::npos);
    CHECK(message.find("sentence 0") != std::string::npos);
  }
}

TEST_CASE("load_seqlab rejects a missing file") {
  CHECK_THROWS_AS(load_seqlab("/nonexistent/file.tsv"), ConfigError);
}

TEST_CASE("seqlab examples round-trip through disk") {
  TempDir dir;
  auto file = dir.path / "rt.tsv";
  write_file(file, "Москва\tB-LOC\n\nон\tO\nушёл\tO\n");
  auto examples = load_seqlab(file);
  write_seqlab(file, examples);
  auto reloaded = load_seqlab(file);
  REQUIRE(reloaded.size() == examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    CHECK(examples_equal(examples[i], reloaded[i]));
  }
}

TEST_CASE("load_cls reads id, label and tab-containing text") {
  TempDir dir;
  auto file = dir.path / "cls.tsv";
  write_file(file,
             "a1\tscience\tтекст о науке\n"
             "a2\tsports\tmatch\treport with tab\n"
             "a3\tscience\tдругой текст\n");
  auto examples = load_cls(file, {"science", "sports"});
  REQUIRE(examples.size() == 3);
  CHECK(examples[0].id == "a1");
  CHECK(examples[0].cls().label == "science");
  CHECK(examples[1].cls().text == "match\treport with tab");
  CHECK(examples[2].cls().text == "другой текст");
}

TEST_CASE("load_cls assigns ids to rows with an empty id field") {
  TempDir dir;
  auto file = dir.path / "anon.tsv";
  write_file(file, "\tx\tfirst\n\ty\tsecond\n");
  auto examples = load_cls(file, {"x", "y"});
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].id == "anon:0");
  CHECK(examples[1].id == "anon:1");
}

TEST_CASE("load_cls rejects labels outside the label set") {
  TempDir dir;
  auto file = dir.path / "cls.tsv";
  write_file(file, "a1\tpolitics\ttext\n");
  try {
    load_cls(file, {"science", "sports"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string message = e.what();
    CHECK(message.find("politics") != std::string::npos);
    CHECK(message.find("cls.tsv:1") != std::string::npos);
  }
}

TEST_CASE("load_cls rejects duplicate ids") {
  TempDir dir;
  auto file = dir.path / "dup.tsv";
  write_file(file, "a\tx\tone\na\tx\ttwo\n");
  try {
    load_cls(file, {"x"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("duplicate id") != std::string::npos);
  }
}

TEST_CASE("load_cls rejects empty text and short rows") {
  TempDir dir;
  auto file = dir.path / "bad.tsv";
  write_file(file, "a\tx\t\n");
  CHECK_THROWS_AS(load_cls(file, {"x"}), ConfigError);
  write_file(file, "a\tx\n");
  CHECK_THROWS_AS(load_cls(file, {"x"}), ConfigError);
  write_file(file, "a\tx\tok\n");
  CHECK_THROWS_AS(load_cls(file, {}), ConfigError);
}

TEST_CASE("cls examples round-trip through disk") {
  TempDir dir;
  auto file = dir.path / "rt.tsv";
  write_file(file, "q1\tscience\tпервый\nq2\tsports\tвторой\n");
  auto examples = load_cls(file, {"science", "sports"});
  write_cls(file, examples);
  auto reloaded = load_cls(file, {"science", "sports"});
  REQUIRE(reloaded.size() == examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    CHECK(examples_equal(examples[i], reloaded[i]));
  }
}

TEST_CASE("load_embeddings reads uniform-dimension vectors") {
  TempDir dir;
  auto file = dir.path / "emb.tsv";
  std::string content;
  for (int v = 0; v < 5; ++v) {
    content += "ex" + std::to_string(v) + "\t";
    for (int d = 0; d < 768; ++d) {
      if (d > 0) content += ",";
      content += std::to_string((v * 768 + d) % 13) + ".5";
    }
    content += "\n";
  }
  write_file(file, content);
  auto embeddings = load_embeddings(file);
  REQUIRE(embeddings.size() == 5);
  CHECK(embeddings.at("ex0").values.size() == 768);
  CHECK(embeddings.at("ex4").values[0] == doctest::Approx(4.5));
}

TEST_CASE("load_embeddings rejects ragged dimensions") {
  TempDir dir;
  auto file = dir.path / "ragged.tsv";
  write_file(file, "a\t1.0,2.0,3.0\nb\t1.0,2.0\n");
  try {
    load_embeddings(file);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string message = e.what();
    CHECK(message.find("ragged.tsv:2") != std::string::npos);
    CHECK(message.find("2") != std::string::npos);
    CHECK(message.find("3") != std::string::npos);
  }
}

TEST_CASE("load_embeddings of an empty file yields an empty map") {
  TempDir dir;
  auto file = dir.path / "empty.tsv";
  write_file(file, "");
  CHECK(load_embeddings(file).empty());
}

TEST_CASE("load_embeddings rejects zero vectors, duplicates and bad floats") {
  TempDir dir;
  auto file = dir.path / "bad.tsv";
  write_file(file, "a\t0.0,0.0\n");
  CHECK_THROWS_WITH_AS(load_embeddings(file),
                       doctest::Contains("zero vector"), ConfigError);
  write_file(file, "a\t1.0,0.0\na\t0.0,1.0\n");
  CHECK_THROWS_WITH_AS(load_embeddings(file),
                       doctest::Contains("duplicate id"), ConfigError);
  write_file(file, "a\t1.0,abc\n");
  CHECK_THROWS_AS(load_embeddings(file), ConfigError);
  write_file(file, "a\t1.0, 2.0\n");
  CHECK_THROWS_AS(load_embeddings(file), ConfigError);
}

TEST_CASE("load_embeddings accepts negative and exponent floats") {
  TempDir dir;
  auto file = dir.path / "sci.tsv";
  write_file(file, "a\t-1.5e-3,2,0.25\n");
  auto embeddings = load_embeddings(file);
  CHECK(embeddings.at("a").values ==
        std::vector<double>{-1.5e-3, 2.0, 0.25});
}
