#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "docmt/corpus.hpp"
#include "docmt/tokenizer.hpp"

namespace docmt::seg {

// Half-open sentence range [start, end) of a document, packed under a token
// budget. Token counts are measured on the rendered source side, separators
// included, so they are exactly what the budget was charged for.
struct Segment {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t src_tokens = 0;
  std::size_t tgt_tokens = 0;
  bool oversized = false;  // single sentence already over budget; kept whole

  std::size_t size() const { return end - start; }
  bool operator==(const Segment&) const = default;
};

struct DocumentPlan {
  std::string doc_id;
  std::size_t max_tokens = 0;
  std::vector<Segment> segments;

  bool operator==(const DocumentPlan&) const = default;
};

// Renders sentences [start, end) of `sentences` in separator form:
//   "#1 s_start #2 s_{start+1} ..."
// Numbering is always relative to the segment, starting at #1.
std::string render_segment(const std::vector<std::string>& sentences,
                           std::size_t start, std::size_t end);

// Greedy left-to-right packing: each segment takes sentences while the
// rendered source side stays within `max_tokens` under `tok`. A sentence that
// does not fit alone becomes its own segment with `oversized` set; it is
// never truncated. Token counts cover the rendered form on both sides.
DocumentPlan plan_document(const corpus::ParallelDocument& doc,
                           std::size_t max_tokens, tok::Tokenizer& tok);

// Plans every document of `corpus` at every budget in `max_tokens_list`,
// in corpus order per budget. With workers > 1 the documents are tokenized
// in a thread pool; output order is independent of scheduling. External
// tokenizers serialize on the shared subprocess, so parallelism only pays
// for builtin tokenizers.
std::vector<DocumentPlan> plan_corpus(const corpus::Corpus& corpus,
                                      const std::vector<std::size_t>& max_tokens_list,
                                      const tok::TokenizerSpec& spec,
                                      unsigned workers = 1);

// JSONL, one plan per line:
// {"doc_id":..,"L":..,"segments":[{"start":..,"end":..,"src_tokens":..,
//  "tgt_tokens":..,"oversized":..},..]}
void save_plans(const std::vector<DocumentPlan>& plans, std::ostream& out);
std::vector<DocumentPlan> load_plans(std::istream& in);

}  // namespace docmt::seg
