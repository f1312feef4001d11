#include <fstream>
#include <random>
#include <sstream>

#include <doctest.h>

#include "ats/text_pipeline.hpp"

using namespace ats;

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

TEST_CASE("strip_markup removes tags and parenthesis characters") {
  CHECK(strip_markup("a <b>big</b> cat") == "a big cat");
  CHECK(strip_markup("no tags here") == "no tags here");
  CHECK(strip_markup("profit (net) rose") == "profit net rose");
  CHECK(strip_markup("<html><p>x</p></html>") == "x");
  // An unterminated tag is not a tag.
  CHECK(strip_markup("1 < 2") == "1 < 2");
}

TEST_CASE("expand_contractions covers the paper's examples") {
  CHECK(expand_contractions("doesn't") == "does not");
  CHECK(expand_contractions("aren't") == "are not");
  CHECK(expand_contractions("cat") == "cat");
  CHECK(expand_contractions("she's here, isn't she?") == "she is here, is not she?");
  // Keys only match as whole words.
  CHECK(expand_contractions("hell's bells") == "hell's bells");
}

TEST_CASE("every key of the shipped table expands") {
  const auto& table = contraction_table();
  CHECK(table.size() >= 100);
  for (const auto& [key, expansion] : table) {
    CHECK(expand_contractions(key) == expansion);
  }
}

TEST_CASE("lemmatize_basic suffix rules and guards") {
  CHECK(lemmatize_basic("films") == "film");
  CHECK(lemmatize_basic("glass") == "glass");
  CHECK(lemmatize_basic("cat") == "cat");
  CHECK(lemmatize_basic("stories") == "story");
  CHECK(lemmatize_basic("ties") == "tie");
  CHECK(lemmatize_basic("boxes") == "box");
  CHECK(lemmatize_basic("watches") == "watch");
  CHECK(lemmatize_basic("glasses") == "glass");
  CHECK(lemmatize_basic("makes") == "make");
  CHECK(lemmatize_basic("houses") == "house");
  CHECK(lemmatize_basic("news") == "news");
  CHECK(lemmatize_basic("us") == "us");
  CHECK(lemmatize_basic("this") == "this");
  CHECK(lemmatize_basic("virus") == "virus");
  CHECK(lemmatize_basic("basis") == "basis");
  CHECK(lemmatize_basic("1990s") == "1990");
}

TEST_CASE("clean_text applies the ordered pipeline") {
  CHECK(clean_text("Doesn't <b>He</b> Run?", false) ==
        std::vector<std::string>{"does", "not", "he", "run"});
  CHECK(clean_text("", true).empty());
  CHECK(clean_text("   \t ", true).empty());
  CHECK(clean_text("Good summary.", true) ==
        std::vector<std::string>{"<start>", "good", "summary", "<end>"});
  CHECK(clean_text("line one\nline two", false) ==
        std::vector<std::string>{"line", "one", "line", "two"});
}

TEST_CASE("clean_text output uses only the allowed alphabet") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw(rng() % 60, '\0');
    for (char& c : raw) c = static_cast<char>(rng() % 256);
    for (const auto& token : clean_text(raw, false)) {
      CHECK_FALSE(token.empty());
      for (char c : token) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("clean_text is idempotent on its own output") {
  std::mt19937_64 rng(123);
  const std::vector<std::string> snippets = {
      "Movies aren't (always) great <em>films</em>!",
      "The CEO's 3 plans, don't they work?",
      "Boxes of watches & glasses, 100% ready...",
      "It'll've been years",
  };
  for (const auto& s : snippets) {
    const auto once = clean_text(s, false);
    CHECK(clean_text(join(once), false) == once);
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::string raw(rng() % 40, '\0');
    for (char& c : raw) c = static_cast<char>(32 + rng() % 95);
    const auto once = clean_text(raw, false);
    CHECK(clean_text(join(once), false) == once);
  }
}

TEST_CASE("golden preprocessing pairs match exactly") {
  std::ifstream is(std::string(ATS_DATA_DIR) + "/golden_preprocessing.tsv");
  REQUIRE(is.good());
  std::string line;
  std::size_t checked = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string flag, raw, expected;
    REQUIRE(std::getline(ls, flag, '\t'));
    REQUIRE(std::getline(ls, raw, '\t'));
    std::getline(ls, expected);  // may be empty for rejected inputs
    const bool is_summary = flag == "1";
    CAPTURE(raw);
    CHECK(clean_text(raw, is_summary) == split_ws(expected));
    ++checked;
  }
  CHECK(checked >= 20);
}
