#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docmt/corpus.hpp"
#include "docmt/segment.hpp"

namespace docmt::inst {

// One fine-tuning example: the task statement, the source text, and the
// expected translation. Document-level records carry `#k` separators in both
// input and output; sentence-level records carry none and store "SENT" in
// place of a token budget.
struct RecordMeta {
  std::string doc_id;
  std::optional<std::size_t> max_tokens;  // nullopt means sentence level
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const RecordMeta&) const = default;
};

struct InstructionRecord {
  std::string instruction;
  std::string input;
  std::string output;
  RecordMeta meta;

  bool operator==(const InstructionRecord&) const = default;
};

struct PromptTemplate {
  // Must mention {src_lang} and {tgt_lang}; both expand to display names.
  std::string header = "Translate the following text from {src_lang} to {tgt_lang}.";
  std::string response_prefix = "text:";
  // Overrides and extensions to the builtin ISO-639-1 display-name table.
  std::map<std::string, std::string> language_names;
};

class UnknownLanguageCode : public ValidationError {
 public:
  explicit UnknownLanguageCode(const std::string& code);
  std::string code;
};

class EmptyLengths : public ValidationError {
 public:
  EmptyLengths();
};

class ScheduleReferencesNonTrainDoc : public ValidationError {
 public:
  explicit ScheduleReferencesNonTrainDoc(const std::string& doc_id);
  std::string doc_id;
};

// Display name for an ISO code, template overrides first. Throws
// UnknownLanguageCode for codes absent from both tables.
std::string language_name(const std::string& code, const PromptTemplate& tmpl);

// Header with {src_lang}/{tgt_lang} replaced by display names. Validates the
// placeholders are present.
std::string render_instruction_header(const corpus::LangPair& lang_pair,
                                      const PromptTemplate& tmpl);

InstructionRecord render_sentence_instruction(const std::string& src,
                                              const std::string& tgt,
                                              const corpus::LangPair& lang_pair,
                                              const PromptTemplate& tmpl,
                                              const std::string& doc_id,
                                              std::size_t sentence_index);

InstructionRecord render_document_instruction(const corpus::ParallelDocument& doc,
                                              const seg::Segment& segment,
                                              std::size_t max_tokens,
                                              const PromptTemplate& tmpl);

enum class Strategy { replicate, partition };

Strategy parse_strategy(std::string_view name);

// doc_id -> budgets assigned to it. replicate gives every doc every budget;
// partition shuffles doc ids with `seed` and deals them round-robin across
// budgets, so group sizes differ by at most one.
std::map<std::string, std::vector<std::size_t>> build_length_schedule(
    const std::vector<std::string>& doc_ids, const std::vector<std::size_t>& lengths,
    Strategy strategy, std::uint64_t seed);

// The mixed-instruction set: document-level records for every (doc, L) in
// `schedule` (packed under the given tokenizer), plus sentence-level records
// for train docs when enabled. `sentence_budget` caps how many sentence
// records are kept (train order, then sentence order); nullopt keeps all.
// The combined list is shuffled with the deterministic PRNG under `seed`.
std::vector<InstructionRecord> assemble_mixed(
    const corpus::Corpus& corpus, const corpus::DatasetSplit& split,
    const std::map<std::string, std::vector<std::size_t>>& schedule,
    bool include_sentence_level, std::optional<std::size_t> sentence_budget,
    std::uint64_t seed, const tok::TokenizerSpec& tok_spec,
    const PromptTemplate& tmpl = {}, unsigned workers = 1);

// "### Instruction:\n{instruction}\n\n### Input:\n{input}\n\n### Response:\n"
// followed by the template's response prefix. The expected output is not
// part of the prompt.
std::string render_prompt(const InstructionRecord& record, const PromptTemplate& tmpl);

// JSONL {"instruction":..,"input":..,"output":..,"meta":{"doc_id":..,
// "L":<count or "SENT">,"start":..,"end":..}}
void save_records(const std::vector<InstructionRecord>& records, std::ostream& out);
std::vector<InstructionRecord> load_records(std::istream& in);

}  // namespace docmt::inst
