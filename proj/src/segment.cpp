#include "docmt/segment.hpp"

#include <atomic>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace docmt::seg {

namespace {

std::string separator(std::size_t k) { return "#" + std::to_string(k); }

// Builtin tokenizers split deterministically at whitespace, so the token
// count of "a b" equals count(a) + count(b). That additivity lets the packer
// charge each sentence once instead of re-tokenizing candidate segments.
bool supports_incremental(const tok::Tokenizer& tok) {
  return tok.spec().kind != tok::Kind::external;
}

std::size_t rendered_cost(const std::vector<std::string>& sentences,
                          std::size_t start, std::size_t end, tok::Tokenizer& tok) {
  return tok.count(render_segment(sentences, start, end));
}

}  // namespace

std::string render_segment(const std::vector<std::string>& sentences,
                           std::size_t start, std::size_t end) {
  if (start >= end || end > sentences.size())
    throw ValidationError("segment range [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") is invalid");
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += separator(i - start + 1);
    out += ' ';
    out += sentences[i];
  }
  return out;
}

DocumentPlan plan_document(const corpus::ParallelDocument& doc,
                           std::size_t max_tokens, tok::Tokenizer& tok) {
  if (max_tokens == 0) throw ValidationError("token budget must be positive");
  DocumentPlan plan;
  plan.doc_id = doc.doc_id;
  plan.max_tokens = max_tokens;

  const std::size_t n = doc.size();
  const bool incremental = supports_incremental(tok);

  // Per-sentence source costs, reusable across segments for builtin
  // tokenizers. Separator cost depends on its index within the segment, so
  // it is charged per position below.
  std::vector<std::size_t> src_cost;
  if (incremental) {
    src_cost.reserve(n);
    for (const auto& s : doc.source) src_cost.push_back(tok.count(s));
  }

  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    std::size_t cost;
    if (incremental) {
      cost = tok.count(separator(1)) + src_cost[start];
      while (end < n) {
        std::size_t added = tok.count(separator(end - start + 1)) + src_cost[end];
        if (cost + added > max_tokens) break;
        cost += added;
        ++end;
      }
    } else {
      cost = rendered_cost(doc.source, start, end, tok);
      while (end < n) {
        std::size_t next = rendered_cost(doc.source, start, end + 1, tok);
        if (next > max_tokens) break;
        cost = next;
        ++end;
      }
    }
    Segment seg;
    seg.start = start;
    seg.end = end;
    seg.src_tokens = cost;
    seg.tgt_tokens = rendered_cost(doc.target, start, end, tok);
    seg.oversized = cost > max_tokens;
    plan.segments.push_back(seg);
    start = end;
  }
  return plan;
}

std::vector<DocumentPlan> plan_corpus(const corpus::Corpus& corpus,
                                      const std::vector<std::size_t>& max_tokens_list,
                                      const tok::TokenizerSpec& spec,
                                      unsigned workers) {
  struct Task {
    std::size_t doc = 0;
    std::size_t budget = 0;
  };
  std::vector<Task> tasks;
  tasks.reserve(corpus.documents.size() * max_tokens_list.size());
  for (std::size_t budget : max_tokens_list)
    for (std::size_t d = 0; d < corpus.documents.size(); ++d)
      tasks.push_back(Task{d, budget});

  std::vector<DocumentPlan> plans(tasks.size());
  tok::Tokenizer tok(spec);

  if (workers <= 1 || tasks.size() <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      plans[i] = plan_document(corpus.documents[tasks[i].doc], tasks[i].budget, tok);
    return plans;
  }

  std::atomic<std::size_t> next{0};
  std::mutex fail_mu;
  std::exception_ptr failure;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        plans[i] = plan_document(corpus.documents[tasks[i].doc], tasks[i].budget, tok);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned count = std::min<std::size_t>(workers, tasks.size());
  pool.reserve(count);
  for (unsigned w = 0; w < count; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return plans;
}

void save_plans(const std::vector<DocumentPlan>& plans, std::ostream& out) {
  for (const auto& plan : plans) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = plan.doc_id;
    obj["L"] = plan.max_tokens;
    nlohmann::ordered_json segs = nlohmann::ordered_json::array();
    for (const auto& seg : plan.segments) {
      nlohmann::ordered_json s;
      s["start"] = seg.start;
      s["end"] = seg.end;
      s["src_tokens"] = seg.src_tokens;
      s["tgt_tokens"] = seg.tgt_tokens;
      s["oversized"] = seg.oversized;
      segs.push_back(std::move(s));
    }
    obj["segments"] = std::move(segs);
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("plan write failed");
}

std::vector<DocumentPlan> load_plans(std::istream& in) {
  std::vector<DocumentPlan> plans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("plan line " + std::to_string(line_no) + ": " + e.what());
    }
    DocumentPlan plan;
    try {
      plan.doc_id = obj.at("doc_id").get<std::string>();
      plan.max_tokens = obj.at("L").get<std::size_t>();
      for (const auto& s : obj.at("segments")) {
        Segment seg;
        seg.start = s.at("start").get<std::size_t>();
        seg.end = s.at("end").get<std::size_t>();
        seg.src_tokens = s.at("src_tokens").get<std::size_t>();
        seg.tgt_tokens = s.at("tgt_tokens").get<std::size_t>();
        seg.oversized = s.at("oversized").get<bool>();
        plan.segments.push_back(seg);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("plan line " + std::to_string(line_no) + ": " + e.what());
    }
    plans.push_back(std::move(plan));
  }
  if (in.bad()) throw IoError("plan read failed");
  return plans;
}

}  // namespace docmt::seg
