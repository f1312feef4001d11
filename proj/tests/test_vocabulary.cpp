#include <random>
#include <sstream>

#include <doctest.h>

#include "ats/errors.hpp"
#include "ats/vocabulary.hpp"

using namespace ats;

namespace {

CleanExample article_only(std::vector<std::string> tokens) {
  CleanExample ex;
  ex.article_tokens = std::move(tokens);
  return ex;
}

}  // namespace

TEST_CASE("build assigns reserved ids then frequency order") {
  const Vocabulary v = Vocabulary::build({article_only({"a", "b", "a"})}, 10, 1);
  CHECK(v.size() == 6);
  CHECK(v.token_of(0) == kPadToken);
  CHECK(v.token_of(1) == kStartToken);
  CHECK(v.token_of(2) == kEndToken);
  CHECK(v.token_of(3) == kUnkToken);
  CHECK(v.id_of("a") == 4);
  CHECK(v.id_of("b") == 5);
  CHECK(v.frequency_of(4) == 2);
}

TEST_CASE("min_freq can leave only the specials") {
  const Vocabulary v = Vocabulary::build({article_only({"a"})}, 5, 2);
  CHECK(v.size() == 4);
  CHECK(v.id_of("a") == Vocabulary::kUnkId);
}

TEST_CASE("frequency ties break lexicographically") {
  const Vocabulary v = Vocabulary::build({article_only({"b", "a"})}, 10, 1);
  CHECK(v.id_of("a") == 4);
  CHECK(v.id_of("b") == 5);
}

TEST_CASE("boundary markers are not counted as corpus tokens") {
  CleanExample ex;
  ex.article_tokens = {"a"};
  ex.summary_tokens = {kStartToken, "a", kEndToken};
  const Vocabulary v = Vocabulary::build({ex}, 10, 1);
  CHECK(v.size() == 5);
  CHECK(v.frequency_of(4) == 2);
}

TEST_CASE("empty corpus is rejected") {
  CHECK_THROWS_AS(Vocabulary::build({}, 10, 1), EmptyCorpus);
  CHECK_THROWS_AS(Vocabulary::build({article_only({})}, 10, 1), EmptyCorpus);
}

TEST_CASE("max_size caps the vocabulary") {
  const Vocabulary v =
      Vocabulary::build({article_only({"a", "a", "b", "b", "c"})}, 6, 1);
  CHECK(v.size() == 6);
  CHECK(v.contains("a"));
  CHECK(v.contains("b"));
  CHECK_FALSE(v.contains("c"));
  CHECK_THROWS_AS(Vocabulary::build({article_only({"a"})}, 4, 1), ConfigError);
}

TEST_CASE("build is deterministic") {
  const std::vector<CleanExample> corpus{article_only({"x", "y", "x", "z", "w", "w"})};
  const Vocabulary a = Vocabulary::build(corpus, 10, 1);
  const Vocabulary b = Vocabulary::build(corpus, 10, 1);
  for (int id = 0; id < static_cast<int>(a.size()); ++id) {
    CHECK(a.token_of(id) == b.token_of(id));
  }
}

TEST_CASE("encode pads, truncates and maps oov to unk") {
  const Vocabulary v = Vocabulary::build({article_only({"a", "b", "a"})}, 10, 1);

  const EncodedSeq simple = encode({"a", "b"}, v, 4);
  CHECK(simple.ids == std::vector<int>{4, 5, 0, 0});
  CHECK(simple.len == 2);

  const EncodedSeq oov = encode({"zzz"}, v, 2);
  CHECK(oov.ids == std::vector<int>{3, 0});
  CHECK(oov.len == 1);

  const EncodedSeq summary =
      encode({kStartToken, "a", "b", "b", kEndToken}, v, 4);
  CHECK(summary.ids == std::vector<int>{1, 4, 5, 2});
  CHECK(summary.len == 4);

  const EncodedSeq plain_truncation = encode({"a", "b", "a", "b", "a"}, v, 3);
  CHECK(plain_truncation.ids == std::vector<int>{4, 5, 4});
}

TEST_CASE("decode strips pad and boundary ids") {
  const Vocabulary v = Vocabulary::build({article_only({"a", "b", "a"})}, 10, 1);
  CHECK(decode_ids({1, 4, 5, 2, 0}, v) == std::vector<std::string>{"a", "b"});
  CHECK(decode_ids({}, v).empty());
  CHECK(decode_ids({3}, v) == std::vector<std::string>{kUnkToken});
  CHECK_THROWS_AS(decode_ids({99}, v), IdOutOfRange);
}

TEST_CASE("encode/decode round trip on random in-vocabulary sequences") {
  const Vocabulary v =
      Vocabulary::build({article_only({"a", "b", "c", "d", "e"})}, 16, 1);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e"};
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tokens(rng() % 8);
    for (auto& t : tokens) t = alphabet[rng() % alphabet.size()];
    const EncodedSeq enc = encode(tokens, v, 10);
    CHECK(decode_ids(enc.ids, v) == tokens);
  }
}

TEST_CASE("vocabulary text format round trips") {
  const Vocabulary v = Vocabulary::build(
      {article_only({"alpha", "beta", "alpha", "gamma"})}, 10, 1);
  std::ostringstream os;
  v.write(os);
  std::istringstream is(os.str());
  const Vocabulary back = Vocabulary::read(is);
  CHECK(back.size() == v.size());
  for (int id = 0; id < static_cast<int>(v.size()); ++id) {
    CHECK(back.token_of(id) == v.token_of(id));
    CHECK(back.frequency_of(id) == v.frequency_of(id));
  }
  std::istringstream garbage("0\t<pad>\n");
  CHECK_THROWS_AS(Vocabulary::read(garbage), CorruptSection);
}

TEST_CASE("tokenize_example records both lengths") {
  CleanExample ex;
  ex.article_tokens = {"a", "b", "a"};
  ex.summary_tokens = {kStartToken, "b", kEndToken};
  const Vocabulary v = Vocabulary::build({ex}, 10, 1);
  const TokenizedExample tok = tokenize_example(ex, v, 5, 4);
  CHECK(tok.input_len == 3);
  CHECK(tok.target_len == 3);
  CHECK(tok.input_ids.size() == 5);
  CHECK(tok.target_ids.size() == 4);
  CHECK(tok.target_ids[0] == Vocabulary::kStartId);
}
