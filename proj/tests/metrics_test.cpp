#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "docmt/metrics.hpp"
#include "docmt/segment.hpp"
#include "oracles.hpp"

using namespace docmt;

namespace {

using Corpus = std::vector<tok::TokenSequence>;

Corpus random_corpus(std::mt19937_64& rng, std::size_t segments, std::size_t max_len,
                     std::size_t vocab) {
  Corpus corpus;
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  for (std::size_t s = 0; s < segments; ++s) {
    tok::TokenSequence seg;
    std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) seg.push_back(oracle::random_word(rng, vocab));
    corpus.push_back(std::move(seg));
  }
  return corpus;
}

tok::TokenizerSpec ws() { return tok::TokenizerSpec::parse_flag("whitespace"); }

}  // namespace

TEST_CASE("identity scores exactly 100") {
  Corpus c{{"the", "cat", "sat", "down"}, {"it", "was", "quiet"}};
  auto bleu = metrics::corpus_bleu(c, c);
  CHECK(bleu.score == 100.0);
  CHECK(bleu.brevity_penalty == 1.0);
  CHECK(bleu.effective_order == 4);
  for (double p : bleu.precisions) CHECK(p == 1.0);
}

TEST_CASE("disjoint corpora score zero") {
  Corpus hyp{{"a", "b", "c", "d", "e"}};
  Corpus ref{{"v", "w", "x", "y", "z"}};
  CHECK(metrics::corpus_bleu(hyp, ref).score == 0.0);
}

TEST_CASE("brevity penalty and pooled counts") {
  SUBCASE("short hypothesis is penalized") {
    Corpus hyp{{"a", "b"}};
    Corpus ref{{"a", "b", "c"}};
    auto bleu = metrics::corpus_bleu(hyp, ref, 2);
    CHECK(bleu.precisions[0] == 1.0);
    CHECK(bleu.precisions[1] == 1.0);
    CHECK(bleu.brevity_penalty == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(bleu.score == doctest::Approx(std::exp(-0.5) * 100.0).epsilon(1e-12));
  }
  SUBCASE("length is pooled across segments before the penalty") {
    // One empty and one perfect segment: hyp_len 1, ref_len 2.
    Corpus hyp{{}, {"a"}};
    Corpus ref{{"x"}, {"a"}};
    auto bleu = metrics::corpus_bleu(hyp, ref, 1);
    CHECK(bleu.precisions[0] == 1.0);
    CHECK(bleu.score == doctest::Approx(std::exp(-1.0) * 100.0).epsilon(1e-12));
  }
  SUBCASE("clipping caps repeated tokens") {
    Corpus hyp{{"a", "a", "b"}};
    Corpus ref{{"a", "b"}};
    auto bleu = metrics::corpus_bleu(hyp, ref, 1);
    CHECK(bleu.precisions[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(bleu.brevity_penalty == 1.0);
  }
}

TEST_CASE("effective order tracks the longest hypothesis") {
  Corpus hyp{{"a"}, {"b"}};
  auto bleu = metrics::corpus_bleu(hyp, hyp);
  CHECK(bleu.effective_order == 1);
  CHECK(bleu.score == 100.0);
  CHECK(bleu.precisions[1] == 0.0);
  CHECK(bleu.precisions[3] == 0.0);
}

TEST_CASE("empty hypothesis corpus scores zero with zero penalty") {
  Corpus hyp{{}};
  Corpus ref{{"a", "b"}};
  auto bleu = metrics::corpus_bleu(hyp, ref);
  CHECK(bleu.score == 0.0);
  CHECK(bleu.brevity_penalty == 0.0);
  CHECK(bleu.hyp_len == 0);
  CHECK(bleu.effective_order == 0);
}

TEST_CASE("add-k smoothing touches orders above one only") {
  Corpus hyp{{"a", "x", "b"}};
  Corpus ref{{"a", "y", "b"}};
  auto plain = metrics::corpus_bleu(hyp, ref, 2);
  CHECK(plain.score == 0.0);
  CHECK(plain.precisions[1] == 0.0);
  auto smoothed = metrics::corpus_bleu(hyp, ref, 2, metrics::Smoothing::add_k(1.0));
  CHECK(smoothed.precisions[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(smoothed.precisions[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  double expected = std::exp((std::log(2.0 / 3.0) + std::log(1.0 / 3.0)) / 2.0) * 100.0;
  CHECK(smoothed.score == doctest::Approx(expected).epsilon(1e-12));

  SUBCASE("a zero unigram precision still zeroes the smoothed score") {
    Corpus h{{"q", "q"}};
    Corpus r{{"z", "z"}};
    CHECK(metrics::corpus_bleu(h, r, 2, metrics::Smoothing::add_k(1.0)).score == 0.0);
  }
}

TEST_CASE("corpus BLEU matches the map-based oracle") {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<std::size_t> seg_count(1, 20);
  for (int i = 0; i < 200; ++i) {
    std::size_t segments = seg_count(rng);
    Corpus hyp = random_corpus(rng, segments, 12, 10);
    Corpus ref = random_corpus(rng, segments, 12, 10);
    double ours = metrics::corpus_bleu(hyp, ref).score;
    double expected = oracle::bleu_score(hyp, ref);
    CHECK(std::abs(ours - expected) < 1e-9);
  }
}

TEST_CASE("scores stay within [0, 100]") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::size_t> seg_count(1, 8);
  for (int i = 0; i < 300; ++i) {
    std::size_t segments = seg_count(rng);
    Corpus hyp = random_corpus(rng, segments, 10, 6);
    Corpus ref = random_corpus(rng, segments, 10, 6);
    auto bleu = metrics::corpus_bleu(hyp, ref);
    CHECK(bleu.score >= 0.0);
    CHECK(bleu.score <= 100.0);
    CHECK(bleu.brevity_penalty >= 0.0);
    CHECK(bleu.brevity_penalty <= 1.0);
    for (double p : bleu.precisions) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}

TEST_CASE("segment order does not change the score") {
  std::mt19937_64 rng(12);
  Corpus hyp = random_corpus(rng, 10, 8, 6);
  Corpus ref = random_corpus(rng, 10, 8, 6);
  double base = metrics::corpus_bleu(hyp, ref).score;
  std::vector<std::size_t> perm(hyp.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Corpus hyp2, ref2;
  for (std::size_t i : perm) {
    hyp2.push_back(hyp[i]);
    ref2.push_back(ref[i]);
  }
  CHECK(metrics::corpus_bleu(hyp2, ref2).score == base);
}

TEST_CASE("shape validation") {
  Corpus one{{"a"}};
  Corpus two{{"a"}, {"b"}};
  CHECK_THROWS_AS(metrics::corpus_bleu(one, two), metrics::BleuLengthMismatch);
  CHECK_THROWS_AS(metrics::corpus_bleu({}, {}), metrics::EmptyCorpus);
  CHECK_THROWS_AS(metrics::corpus_bleu(one, one, 0), ValidationError);
}

TEST_CASE("separator stripping") {
  CHECK(metrics::strip_separators("#1 a b #2 c") == "a b c");
  CHECK(metrics::strip_separators("the #3 third") == "the third");
  CHECK(metrics::strip_separators("#12 x") == "x");
  CHECK(metrics::strip_separators("#x stays") == "#x stays");
  CHECK(metrics::strip_separators("a#1 stays") == "a#1 stays");
  CHECK(metrics::strip_separators("") == "");
  CHECK(metrics::strip_separators("#1") == "");
  CHECK(metrics::strip_separators("a  b") == "a b");

  SUBCASE("idempotent") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
      std::string text = "#1 " + oracle::random_sentence(rng, 6) + " #2 " +
                         oracle::random_sentence(rng, 6);
      std::string once = metrics::strip_separators(text);
      CHECK(metrics::strip_separators(once) == once);
    }
  }
}

TEST_CASE("document BLEU equals corpus BLEU on single-sentence documents") {
  std::mt19937_64 rng(31);
  std::vector<std::string> doc_hyps, doc_refs;
  Corpus hyp_tokens, ref_tokens;
  for (int i = 0; i < 40; ++i) {
    std::string h = oracle::random_sentence(rng, 10);
    std::string r = oracle::random_sentence(rng, 10);
    doc_hyps.push_back("#1 " + h);
    doc_refs.push_back(r);
    hyp_tokens.push_back(tok::tokenize(h, ws()));
    ref_tokens.push_back(tok::tokenize(r, ws()));
  }
  auto d = metrics::dbleu(doc_hyps, doc_refs, ws());
  auto s = metrics::corpus_bleu(hyp_tokens, ref_tokens);
  CHECK(std::abs(d.score - s.score) < 1e-12);
  CHECK(d.hyp_len == s.hyp_len);
  CHECK(d.ref_len == s.ref_len);
}

TEST_CASE("sentence recovery") {
  using Map = std::map<std::size_t, std::string>;
  CHECK(metrics::recover_sentences("#1 Hello #2 World", 2) ==
        Map{{1, "Hello"}, {2, "World"}});
  CHECK(metrics::recover_sentences("#1 a #3 c", 3) == Map{{1, "a"}, {3, "c"}});
  CHECK(metrics::recover_sentences("junk #1 a", 1) == Map{{1, "a"}});
  CHECK(metrics::recover_sentences("no markers", 2) == Map{});
  CHECK(metrics::recover_sentences("", 1) == Map{});
  CHECK_THROWS_AS(metrics::recover_sentences("#1 a", 0), ValidationError);

  SUBCASE("rejected separators stay in the text") {
    CHECK(metrics::recover_sentences("#2 b #1 a", 2) == Map{{2, "b #1 a"}});
    CHECK(metrics::recover_sentences("#1 a #1 b", 2) == Map{{1, "a #1 b"}});
    CHECK(metrics::recover_sentences("#1 a #5 x", 3) == Map{{1, "a #5 x"}});
  }
  SUBCASE("sentences are trimmed but inner spacing is kept") {
    CHECK(metrics::recover_sentences("#1   padded   #2 b", 2) ==
          Map{{1, "padded"}, {2, "b"}});
    CHECK(metrics::recover_sentences("#1 a  b", 1) == Map{{1, "a  b"}});
    CHECK(metrics::recover_sentences("#1 #2 b", 2) == Map{{1, ""}, {2, "b"}});
  }
  SUBCASE("round trip through the renderer is verbatim") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 200; ++i) {
      std::vector<std::string> sents;
      std::uniform_int_distribution<std::size_t> count(1, 8);
      std::size_t n = count(rng);
      for (std::size_t k = 0; k < n; ++k)
        sents.push_back(oracle::random_sentence(rng, 8));
      auto recovered = metrics::recover_sentences(seg::render_segment(sents, 0, n), n);
      REQUIRE(recovered.size() == n);
      for (std::size_t k = 0; k < n; ++k) CHECK(recovered.at(k + 1) == sents[k]);
    }
  }
}

TEST_CASE("coverage report") {
  std::vector<metrics::GeneratedDoc> outputs{
      {"d0", "#1 a #2 b", 2},
      {"d1", "#1 a", 2},
  };
  auto report = metrics::coverage(outputs);
  CHECK(report.corpus_accuracy == 50.0);
  REQUIRE(report.per_doc.size() == 2);
  CHECK(report.per_doc[0].full);
  CHECK(report.per_doc[0].missing.empty());
  CHECK_FALSE(report.per_doc[1].full);
  CHECK(report.per_doc[1].missing == std::vector<std::size_t>{2});
  CHECK(report.per_doc[1].recovered == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(metrics::coverage({}), metrics::EmptyInput);

  SUBCASE("text render") {
    std::string text = metrics::render_coverage_text(report);
    CHECK(text.find("d1: recovered 1/2, missing 2\n") != std::string::npos);
    CHECK(text.find("coverage = 50.0% (1/2 documents fully recovered)\n") !=
          std::string::npos);
  }
}

TEST_CASE("discourse-aware composite") {
  struct Row {
    double tc, cp, pt, expected;
  };
  const Row rows[] = {
      {46.5, 33.8, 63.5, 46.4},
      {51.2, 35.8, 67.9, 49.9},
      {52.1, 36.5, 64.5, 49.7},
      {52.3, 36.3, 65.9, 50.0},
      {49.1, 35.6, 64.9, 48.4},
  };
  for (const auto& row : rows)
    CHECK(std::abs(metrics::tcp(row.tc, row.cp, row.pt) - row.expected) <= 0.05);

  CHECK(metrics::tcp(50.0, 50.0, 50.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(metrics::tcp(1.0, 2.0, 3.0) == metrics::tcp(3.0, 2.0, 1.0));
  CHECK_THROWS_AS(metrics::tcp(0.0, 1.0, 1.0), metrics::NonPositiveInput);
  CHECK_THROWS_AS(metrics::tcp(1.0, -2.0, 1.0), metrics::NonPositiveInput);
  CHECK_THROWS_AS(metrics::tcp(1.0, 1.0, 0.0), metrics::NonPositiveInput);
}

TEST_CASE("sentence BLEU over recovered documents") {
  std::vector<std::string> sents{"the cat sat", "on the mat", "all day long"};
  metrics::GeneratedDoc perfect{"d0", seg::render_segment(sents, 0, 3), 3};
  std::vector<std::vector<std::string>> refs{sents};

  SUBCASE("identity recovers to 100") {
    auto bleu = metrics::sbleu_from_documents({perfect}, refs, ws());
    CHECK(bleu.score == 100.0);
  }
  SUBCASE("missing sentences are scored as empty") {
    metrics::GeneratedDoc partial{"d0", "#1 the cat sat #3 all day long", 3};
    auto bleu = metrics::sbleu_from_documents({partial}, refs, ws());
    CHECK(bleu.score < 100.0);
    CHECK(bleu.score > 0.0);
    CHECK(bleu.hyp_len == 6);
    CHECK(bleu.ref_len == 9);
  }
  SUBCASE("nothing recovered scores zero") {
    metrics::GeneratedDoc none{"d0", "free text with no markers", 3};
    auto bleu = metrics::sbleu_from_documents({none}, refs, ws());
    CHECK(bleu.score == 0.0);
    CHECK(bleu.brevity_penalty == 0.0);
  }
  SUBCASE("reference shape is validated") {
    std::vector<std::vector<std::string>> wrong{{"just one"}};
    CHECK_THROWS_AS(metrics::sbleu_from_documents({perfect}, wrong, ws()),
                    ValidationError);
  }
}

TEST_CASE("hypothesis serialization round trip") {
  std::vector<metrics::HypRecord> hyps;
  metrics::HypRecord a;
  a.doc_id = "d0";
  a.generated = "#1 x";
  a.start = 0;
  a.end = 1;
  a.expected = 1;
  metrics::HypRecord b;
  b.doc_id = "d1";
  b.generated = "plain";
  hyps.push_back(a);
  hyps.push_back(b);
  std::stringstream buf;
  metrics::save_hyps(hyps, buf);
  auto loaded = metrics::load_hyps(buf);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].doc_id == "d0");
  CHECK(loaded[0].start == 0);
  CHECK(loaded[0].expected == 1);
  CHECK(loaded[1].doc_id == "d1");
  CHECK_FALSE(loaded[1].start.has_value());
}

TEST_CASE("BLEU renders") {
  Corpus c{{"a", "b", "c", "d"}};
  auto bleu = metrics::corpus_bleu(c, c);
  CHECK(metrics::render_bleu_text(bleu) ==
        "BLEU = 100.00 100.0/100.0/100.0/100.0 (BP = 1.000, hyp_len = 4, ref_len = 4)\n");
  std::string json = metrics::render_bleu_json(bleu);
  CHECK(json.find("\"score\": 100.0") != std::string::npos);
  CHECK(json.find("\"effective_order\": 4") != std::string::npos);
}
