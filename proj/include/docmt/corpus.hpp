#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "docmt/error.hpp"

namespace docmt::corpus {

struct LangPair {
  std::string src;  // ISO code, e.g. "zh"
  std::string tgt;

  bool operator==(const LangPair&) const = default;
};

// A document-bounded bitext unit: source and target sentence lists of equal
// length. Sentences are nonempty, newline free, and never begin with a
// whitespace-delimited `#<digits>` token (reserved for separators).
struct ParallelDocument {
  std::string doc_id;
  LangPair lang_pair;
  std::vector<std::string> source;
  std::vector<std::string> target;

  std::size_t size() const { return source.size(); }
  bool operator==(const ParallelDocument&) const = default;
};

struct Corpus {
  LangPair lang_pair;
  std::vector<ParallelDocument> documents;

  // Index of doc_id, or npos.
  std::size_t find(std::string_view doc_id) const;
  const ParallelDocument& require(std::string_view doc_id) const;
  bool operator==(const Corpus&) const = default;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct DatasetSplit {
  std::uint64_t seed = 0;
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
  std::vector<std::string> discarded;

  bool operator==(const DatasetSplit&) const = default;
};

class BoundaryMismatch : public ValidationError {
 public:
  explicit BoundaryMismatch(std::size_t line);
  std::size_t line_no;  // 1-based
};

class LengthMismatch : public ValidationError {
 public:
  LengthMismatch(std::size_t doc_index, std::size_t src_count, std::size_t tgt_count);
  std::size_t doc_index;  // 0-based, in file order
};

class EmptySentence : public ValidationError {
 public:
  explicit EmptySentence(std::size_t line);
  std::size_t line_no;
};

class ReservedPrefix : public ValidationError {
 public:
  explicit ReservedPrefix(std::size_t line);
  std::size_t line_no;
};

class EmptyDocument : public ValidationError {
 public:
  explicit EmptyDocument(std::size_t line);
  std::size_t line_no;
};

class CorpusTooSmall : public ValidationError {
 public:
  explicit CorpusTooSmall(std::size_t n);
};

class UnknownDocId : public ValidationError {
 public:
  explicit UnknownDocId(const std::string& doc_id);
  std::string doc_id;
};

// Reads two aligned plain-text files: one sentence per line, documents
// separated by exactly one blank line, blank lines at identical positions in
// both files. Trailing whitespace per line is stripped; doc ids are assigned
// "d%06u" in file order.
Corpus parse_parallel_corpus(const std::string& source_path,
                             const std::string& target_path,
                             const LangPair& lang_pair);

// Same grammar, applied to in-memory file contents.
Corpus parse_parallel_corpus_text(std::string_view source_text,
                                  std::string_view target_text,
                                  const LangPair& lang_pair);

// Deterministic split: documents are shuffled with the splitmix64-driven
// Fisher-Yates shuffle, the first floor(train_frac*N) become train, the next
// floor((1-train_frac)/2*N) form the dev pool (of which the first
// min(dev_docs, pool) are kept), the next equally sized pool feeds test, and
// everything else lands in `discarded`. Nothing ever leaks back into train.
DatasetSplit split_dataset(const Corpus& corpus, std::uint64_t seed,
                           double train_frac = 0.8, std::size_t dev_docs = 150,
                           std::size_t test_docs = 150);

struct SplitStatsRow {
  std::string split;
  std::size_t docs = 0;
  std::size_t sentences = 0;
};

// Rows for train/dev/test/discarded plus a total row.
std::vector<SplitStatsRow> corpus_stats(const Corpus& corpus, const DatasetSplit& split);

std::string render_stats_text(const std::vector<SplitStatsRow>& rows);
std::string render_stats_csv(const std::vector<SplitStatsRow>& rows);
std::string render_stats_json(const std::vector<SplitStatsRow>& rows);

// JSONL, one document per line:
// {"doc_id":..,"src_lang":..,"tgt_lang":..,"source":[..],"target":[..]}
void save_corpus(const Corpus& corpus, std::ostream& out);
Corpus load_corpus(std::istream& in);

// Single JSON object {"seed":..,"train":[..],"dev":[..],"test":[..],"discarded":[..]}
void save_split(const DatasetSplit& split, std::ostream& out);
DatasetSplit load_split(std::istream& in);

}  // namespace docmt::corpus
