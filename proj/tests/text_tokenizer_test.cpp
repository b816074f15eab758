#include <cstdlib>
#include <random>
#include <string>

#include "doctest.h"

#include "docmt/text.hpp"
#include "docmt/tokenizer.hpp"
#include "oracles.hpp"

using namespace docmt;

namespace {

tok::TokenSequence run(const char* flag, std::string_view text) {
  return tok::tokenize(text, tok::TokenizerSpec::parse_flag(flag));
}

std::string stub_tokenizer_flag(const char* extra = "") {
  const char* path = std::getenv("DOCMT_STUB_TOKENIZER");
  REQUIRE(path != nullptr);
  return std::string("external:") + path + extra;
}

}  // namespace

TEST_CASE("separator token detection") {
  std::uint64_t index = 0;
  CHECK(text::is_separator_token("#1", &index));
  CHECK(index == 1);
  CHECK(text::is_separator_token("#42", &index));
  CHECK(index == 42);
  CHECK_FALSE(text::is_separator_token("#"));
  CHECK_FALSE(text::is_separator_token("1"));
  CHECK_FALSE(text::is_separator_token("#1a"));
  CHECK_FALSE(text::is_separator_token("a#1"));
  CHECK_FALSE(text::is_separator_token("C#5"));
  CHECK_FALSE(text::is_separator_token(""));
  CHECK_FALSE(text::is_separator_token("#1 "));
}

TEST_CASE("whitespace tokenizer") {
  CHECK(run("whitespace", "a b c") == tok::TokenSequence{"a", "b", "c"});
  CHECK(run("whitespace", "") == tok::TokenSequence{});
  CHECK(run("whitespace", "   ") == tok::TokenSequence{});
  CHECK(run("whitespace", "#1 Hello #2 World").size() == 4);
  CHECK(run("whitespace", "a b") == tok::TokenSequence{"a", "b"});
  CHECK(run("whitespace", "a　b") == tok::TokenSequence{"a", "b"});
  CHECK(run("whitespace", " leading  double ") == tok::TokenSequence{"leading", "double"});
}

TEST_CASE("intl tokenizer splits punctuation") {
  CHECK(run("intl", "I am happy.") == tok::TokenSequence{"I", "am", "happy", "."});
  CHECK(run("intl", "#1 a") == tok::TokenSequence{"#", "1", "a"});
  CHECK(run("intl", "don't stop") == tok::TokenSequence{"don", "'", "t", "stop"});
  CHECK(run("intl", "你好，世界") ==
        tok::TokenSequence{"你好", "，", "世界"});
}

TEST_CASE("char-cjk tokenizer isolates ideographs") {
  CHECK(run("char-cjk", "你好 world") == tok::TokenSequence{"你", "好", "world"});
  CHECK(run("char-cjk", "abc def") == tok::TokenSequence{"abc", "def"});
  CHECK(run("char-cjk", "中文mixed词") ==
        tok::TokenSequence{"中", "文", "mixed", "词"});
  // Separators survive as single tokens in char mode.
  CHECK(run("char-cjk", "#1 你好") == tok::TokenSequence{"#1", "你", "好"});
}

TEST_CASE("whitespace counting matches an independent ASCII scanner") {
  std::mt19937_64 rng(2024);
  auto spec = tok::TokenizerSpec::parse_flag("whitespace");
  for (int i = 0; i < 500; ++i) {
    std::string text = oracle::random_sentence(rng, 12);
    if (i % 3 == 0) text = "  " + text + "   ";
    CHECK(tok::count_tokens(text, spec) == oracle::ascii_token_count(text));
  }
}

TEST_CASE("tokenization is idempotent over space-joined output") {
  std::mt19937_64 rng(77);
  for (const char* flag : {"whitespace", "char-cjk"}) {
    auto spec = tok::TokenizerSpec::parse_flag(flag);
    for (int i = 0; i < 100; ++i) {
      auto tokens = tok::tokenize(oracle::random_sentence(rng, 10), spec);
      CHECK(tok::tokenize(text::join(tokens, " "), spec) == tokens);
    }
  }
}

TEST_CASE("token counts are additive across a space boundary") {
  std::mt19937_64 rng(31);
  for (const char* flag : {"whitespace", "intl", "char-cjk"}) {
    auto spec = tok::TokenizerSpec::parse_flag(flag);
    tok::Tokenizer tokenizer(spec);
    for (int i = 0; i < 200; ++i) {
      std::string a = oracle::random_sentence(rng, 8);
      std::string b = oracle::random_sentence(rng, 8);
      CHECK(tokenizer.count(a + " " + b) == tokenizer.count(a) + tokenizer.count(b));
    }
  }
}

TEST_CASE("tokenizer flag parsing") {
  CHECK(tok::TokenizerSpec::parse_flag("whitespace").kind == tok::Kind::whitespace);
  CHECK(tok::TokenizerSpec::parse_flag("intl").kind == tok::Kind::intl);
  CHECK(tok::TokenizerSpec::parse_flag("char-cjk").kind == tok::Kind::char_cjk);
  auto ext = tok::TokenizerSpec::parse_flag("external:cat");
  CHECK(ext.kind == tok::Kind::external);
  CHECK(ext.command == "cat");
  CHECK(ext.flag() == "external:cat");
  CHECK_THROWS_AS(tok::TokenizerSpec::parse_flag("bpe"), ValidationError);
  CHECK_THROWS_AS(tok::TokenizerSpec::parse_flag("external:"), ValidationError);
}

TEST_CASE("external adapter matches the builtin whitespace tokenizer") {
  tok::Tokenizer external(tok::TokenizerSpec::parse_flag(stub_tokenizer_flag()));
  tok::Tokenizer builtin(tok::TokenizerSpec::parse_flag("whitespace"));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    std::string text = oracle::random_sentence(rng, 10);
    CHECK(external.tokenize(text) == builtin.tokenize(text));
  }
  CHECK(external.count("") == 0);
  CHECK(external.count("   ") == 0);
  CHECK(external.tokenize("one two") == tok::TokenSequence{"one", "two"});
}

TEST_CASE("external adapter reports a dying tokenizer") {
  tok::Tokenizer failing(
      tok::TokenizerSpec::parse_flag(stub_tokenizer_flag(" --fail-after 2")));
  CHECK(failing.count("a b") == 2);
  CHECK(failing.count("c") == 1);
  CHECK_THROWS_AS(failing.count("d"), tok::ExternalTokenizerFailure);
}

TEST_CASE("trim and join helpers") {
  CHECK(text::trim("  a b  ") == "a b");
  CHECK(text::trim("　a　") == "a");
  CHECK(text::trim("") == "");
  CHECK(text::rtrim("a b  ") == "a b");
  CHECK(text::join({"a", "b"}, " ") == "a b");
  CHECK(text::join({}, " ") == "");
}
