#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docmt/error.hpp"
#include "docmt/tokenizer.hpp"

namespace docmt::metrics {

struct BleuScore {
  double score = 0.0;            // percentage in [0, 100]
  std::vector<double> precisions;  // clipped n-gram precisions, orders 1..max_n
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  // Largest order with at least one hypothesis n-gram anywhere in the corpus.
  // Orders above it are reported as 0 and excluded from the geometric mean.
  std::size_t effective_order = 0;
};

struct Smoothing {
  enum class Kind { none, add_k };
  Kind kind = Kind::none;
  double k = 1.0;  // added to match and total for orders above 1

  static Smoothing none() { return {}; }
  static Smoothing add_k(double k) { return {Kind::add_k, k}; }
};

class BleuLengthMismatch : public ValidationError {
 public:
  BleuLengthMismatch(std::size_t hyps, std::size_t refs);
};

class EmptyCorpus : public ValidationError {
 public:
  EmptyCorpus();
};

class EmptyInput : public ValidationError {
 public:
  EmptyInput();
};

class NonPositiveInput : public ValidationError {
 public:
  explicit NonPositiveInput(const std::string& what);
};

// Corpus-level BLEU with one reference per segment. Case is preserved.
// Clipped n-gram matches are summed over segments before any division; the
// brevity penalty is exp(1 - ref_len/hyp_len) when the hypothesis side is
// shorter, else 1. Without smoothing a zero precision at any effective order
// zeroes the score; add-k smoothing adjusts orders 2..max_n only.
BleuScore corpus_bleu(const std::vector<tok::TokenSequence>& hyps,
                      const std::vector<tok::TokenSequence>& refs,
                      std::size_t max_n = 4, Smoothing smoothing = Smoothing::none());

// Removes every whitespace-delimited `#<digits>` token and rejoins the rest
// with single spaces. Idempotent.
std::string strip_separators(std::string_view text);

// Document-level BLEU: strip separators from both sides, tokenize each whole
// document as one segment, then corpus_bleu over documents.
BleuScore dbleu(const std::vector<std::string>& doc_hyps,
                const std::vector<std::string>& doc_refs,
                const tok::TokenizerSpec& spec, std::size_t max_n = 4,
                Smoothing smoothing = Smoothing::none());

// Pulls sentences back out of a separator-formatted generation. Separators
// are accepted left to right when their index exceeds the last accepted one
// and stays within `expected`; sentence k is the text between separator #k
// and the next accepted separator, trimmed. Rejected separators (duplicates,
// out-of-order, or beyond `expected`) stay in the surrounding text; anything
// before the first accepted separator is dropped. Missing indices are simply
// absent from the map. Indices are 1-based.
std::map<std::size_t, std::string> recover_sentences(std::string_view generated,
                                                     std::size_t expected);

// One model generation to analyze: `expected` sentences were requested.
struct GeneratedDoc {
  std::string doc_id;
  std::string generated;
  std::size_t expected = 0;
};

struct DocCoverage {
  std::string doc_id;
  std::size_t expected = 0;
  std::vector<std::size_t> recovered;  // ascending
  std::vector<std::size_t> missing;    // ascending
  bool full = false;
};

struct CoverageReport {
  std::vector<DocCoverage> per_doc;
  double corpus_accuracy = 0.0;  // percentage of docs with full == true
};

CoverageReport coverage(const std::vector<GeneratedDoc>& outputs);

// Geometric mean of three discourse percentages.
double tcp(double tc, double cp, double pt);

// Sentence-level BLEU of document generations: recover sentence k from each
// generation, pair it with reference sentence k, score missing sentences as
// empty hypotheses, and run corpus_bleu over all pairs. refs[i] holds the
// reference sentences for outputs[i] and must have outputs[i].expected
// entries.
BleuScore sbleu_from_documents(const std::vector<GeneratedDoc>& outputs,
                               const std::vector<std::vector<std::string>>& refs,
                               const tok::TokenizerSpec& spec, std::size_t max_n = 4,
                               Smoothing smoothing = Smoothing::none());

// Hypothesis interchange record. `start`/`end`/`expected` are present when
// the generation covers a sub-range of its document; plain {doc_id,
// generated} lines denote whole documents.
struct HypRecord {
  std::string doc_id;
  std::string generated;
  std::optional<std::size_t> start;
  std::optional<std::size_t> end;
  std::optional<std::size_t> expected;
};

void save_hyps(const std::vector<HypRecord>& hyps, std::ostream& out);
std::vector<HypRecord> load_hyps(std::istream& in);

std::string render_bleu_json(const BleuScore& bleu);
std::string render_bleu_text(const BleuScore& bleu);
std::string render_coverage_json(const CoverageReport& report);
std::string render_coverage_text(const CoverageReport& report);

}  // namespace docmt::metrics
