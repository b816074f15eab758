#include "docmt/instruct.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "json.hpp"

#include "docmt/prng.hpp"

namespace docmt::inst {

namespace {

const std::map<std::string, std::string>& builtin_language_names() {
  static const std::map<std::string, std::string> names = {
      {"ar", "Arabic"},     {"cs", "Czech"},      {"da", "Danish"},
      {"de", "German"},     {"el", "Greek"},      {"en", "English"},
      {"es", "Spanish"},    {"fi", "Finnish"},    {"fr", "French"},
      {"he", "Hebrew"},     {"hi", "Hindi"},      {"id", "Indonesian"},
      {"it", "Italian"},    {"ja", "Japanese"},   {"ko", "Korean"},
      {"nl", "Dutch"},      {"no", "Norwegian"},  {"pl", "Polish"},
      {"pt", "Portuguese"}, {"ro", "Romanian"},   {"ru", "Russian"},
      {"sv", "Swedish"},    {"th", "Thai"},       {"tr", "Turkish"},
      {"uk", "Ukrainian"},  {"vi", "Vietnamese"}, {"zh", "Chinese"},
  };
  return names;
}

void replace_all(std::string& text, std::string_view needle, std::string_view value) {
  std::size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    text.replace(at, needle.size(), value);
    at += value.size();
  }
}

}  // namespace

UnknownLanguageCode::UnknownLanguageCode(const std::string& c)
    : ValidationError("unknown language code: " + c), code(c) {}

EmptyLengths::EmptyLengths() : ValidationError("length list must not be empty") {}

ScheduleReferencesNonTrainDoc::ScheduleReferencesNonTrainDoc(const std::string& id)
    : ValidationError("schedule references non-train document " + id), doc_id(id) {}

std::string language_name(const std::string& code, const PromptTemplate& tmpl) {
  if (auto it = tmpl.language_names.find(code); it != tmpl.language_names.end())
    return it->second;
  const auto& builtin = builtin_language_names();
  if (auto it = builtin.find(code); it != builtin.end()) return it->second;
  throw UnknownLanguageCode(code);
}

std::string render_instruction_header(const corpus::LangPair& lang_pair,
                                      const PromptTemplate& tmpl) {
  if (tmpl.header.find("{src_lang}") == std::string::npos ||
      tmpl.header.find("{tgt_lang}") == std::string::npos)
    throw ValidationError("template header must mention {src_lang} and {tgt_lang}");
  std::string out = tmpl.header;
  replace_all(out, "{src_lang}", language_name(lang_pair.src, tmpl));
  replace_all(out, "{tgt_lang}", language_name(lang_pair.tgt, tmpl));
  return out;
}

InstructionRecord render_sentence_instruction(const std::string& src,
                                              const std::string& tgt,
                                              const corpus::LangPair& lang_pair,
                                              const PromptTemplate& tmpl,
                                              const std::string& doc_id,
                                              std::size_t sentence_index) {
  if (src.empty() || tgt.empty())
    throw ValidationError("sentence-level record needs nonempty source and target");
  InstructionRecord record;
  record.instruction = render_instruction_header(lang_pair, tmpl);
  record.input = src;
  record.output = tgt;
  record.meta.doc_id = doc_id;
  record.meta.max_tokens = std::nullopt;
  record.meta.start = sentence_index;
  record.meta.end = sentence_index + 1;
  return record;
}

InstructionRecord render_document_instruction(const corpus::ParallelDocument& doc,
                                              const seg::Segment& segment,
                                              std::size_t max_tokens,
                                              const PromptTemplate& tmpl) {
  if (segment.start >= segment.end || segment.end > doc.size())
    throw ValidationError("segment out of range for document " + doc.doc_id);
  InstructionRecord record;
  record.instruction = render_instruction_header(doc.lang_pair, tmpl);
  record.input = seg::render_segment(doc.source, segment.start, segment.end);
  record.output = seg::render_segment(doc.target, segment.start, segment.end);
  record.meta.doc_id = doc.doc_id;
  record.meta.max_tokens = max_tokens;
  record.meta.start = segment.start;
  record.meta.end = segment.end;
  return record;
}

Strategy parse_strategy(std::string_view name) {
  if (name == "replicate") return Strategy::replicate;
  if (name == "partition") return Strategy::partition;
  throw ValidationError("unknown strategy: " + std::string(name));
}

std::map<std::string, std::vector<std::size_t>> build_length_schedule(
    const std::vector<std::string>& doc_ids, const std::vector<std::size_t>& lengths,
    Strategy strategy, std::uint64_t seed) {
  if (lengths.empty()) throw EmptyLengths();
  std::set<std::size_t> seen;
  for (std::size_t len : lengths) {
    if (len == 0) throw ValidationError("token budget must be positive");
    if (!seen.insert(len).second)
      throw ValidationError("duplicate length " + std::to_string(len));
  }

  std::map<std::string, std::vector<std::size_t>> schedule;
  if (strategy == Strategy::replicate) {
    for (const auto& id : doc_ids) schedule[id] = lengths;
    return schedule;
  }
  std::vector<std::string> order = doc_ids;
  prng::deterministic_shuffle(order, seed);
  for (std::size_t i = 0; i < order.size(); ++i)
    schedule[order[i]] = {lengths[i % lengths.size()]};
  return schedule;
}

std::vector<InstructionRecord> assemble_mixed(
    const corpus::Corpus& corpus, const corpus::DatasetSplit& split,
    const std::map<std::string, std::vector<std::size_t>>& schedule,
    bool include_sentence_level, std::optional<std::size_t> sentence_budget,
    std::uint64_t seed, const tok::TokenizerSpec& tok_spec,
    const PromptTemplate& tmpl, unsigned workers) {
  std::set<std::string_view> train(split.train.begin(), split.train.end());
  for (const auto& [doc_id, lengths] : schedule) {
    if (!train.count(doc_id)) throw ScheduleReferencesNonTrainDoc(doc_id);
    (void)lengths;
  }

  struct Task {
    const corpus::ParallelDocument* doc = nullptr;
    std::size_t budget = 0;
  };
  std::vector<Task> tasks;
  for (const auto& [doc_id, lengths] : schedule) {
    const auto& doc = corpus.require(doc_id);
    for (std::size_t budget : lengths) tasks.push_back(Task{&doc, budget});
  }

  tok::Tokenizer tok(tok_spec);
  std::vector<std::vector<InstructionRecord>> per_task(tasks.size());
  auto run_task = [&](std::size_t i) {
    const Task& task = tasks[i];
    seg::DocumentPlan plan = seg::plan_document(*task.doc, task.budget, tok);
    per_task[i].reserve(plan.segments.size());
    for (const auto& segment : plan.segments)
      per_task[i].push_back(
          render_document_instruction(*task.doc, segment, task.budget, tmpl));
  };

  if (workers <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex fail_mu;
    std::exception_ptr failure;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          run_task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(fail_mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    unsigned count = std::min<std::size_t>(workers, tasks.size());
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<InstructionRecord> records;
  for (auto& group : per_task)
    for (auto& record : group) records.push_back(std::move(record));

  if (include_sentence_level && (!sentence_budget || *sentence_budget > 0)) {
    std::size_t kept = 0;
    for (const auto& doc_id : split.train) {
      const auto& doc = corpus.require(doc_id);
      for (std::size_t i = 0; i < doc.size(); ++i) {
        if (sentence_budget && kept >= *sentence_budget) break;
        records.push_back(render_sentence_instruction(doc.source[i], doc.target[i],
                                                      doc.lang_pair, tmpl, doc_id, i));
        ++kept;
      }
      if (sentence_budget && kept >= *sentence_budget) break;
    }
  }

  prng::deterministic_shuffle(records, seed);
  return records;
}

std::string render_prompt(const InstructionRecord& record, const PromptTemplate& tmpl) {
  std::string out = "### Instruction:\n";
  out += record.instruction;
  out += "\n\n### Input:\n";
  out += record.input;
  out += "\n\n### Response:\n";
  out += tmpl.response_prefix;
  return out;
}

void save_records(const std::vector<InstructionRecord>& records, std::ostream& out) {
  for (const auto& record : records) {
    nlohmann::ordered_json obj;
    obj["instruction"] = record.instruction;
    obj["input"] = record.input;
    obj["output"] = record.output;
    nlohmann::ordered_json meta;
    meta["doc_id"] = record.meta.doc_id;
    if (record.meta.max_tokens)
      meta["L"] = *record.meta.max_tokens;
    else
      meta["L"] = "SENT";
    meta["start"] = record.meta.start;
    meta["end"] = record.meta.end;
    obj["meta"] = std::move(meta);
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("record write failed");
}

std::vector<InstructionRecord> load_records(std::istream& in) {
  std::vector<InstructionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("record line " + std::to_string(line_no) + ": " + e.what());
    }
    InstructionRecord record;
    try {
      record.instruction = obj.at("instruction").get<std::string>();
      record.input = obj.at("input").get<std::string>();
      record.output = obj.at("output").get<std::string>();
      const auto& meta = obj.at("meta");
      record.meta.doc_id = meta.at("doc_id").get<std::string>();
      const auto& L = meta.at("L");
      if (L.is_string()) {
        if (L.get<std::string>() != "SENT")
          throw ValidationError("record line " + std::to_string(line_no) +
                                ": meta.L must be a count or \"SENT\"");
        record.meta.max_tokens = std::nullopt;
      } else {
        record.meta.max_tokens = L.get<std::size_t>();
      }
      record.meta.start = meta.at("start").get<std::size_t>();
      record.meta.end = meta.at("end").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("record line " + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(record));
  }
  if (in.bad()) throw IoError("record read failed");
  return records;
}

}  // namespace docmt::inst
