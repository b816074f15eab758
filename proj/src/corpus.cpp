#include "docmt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "docmt/prng.hpp"
#include "docmt/text.hpp"

namespace docmt::corpus {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return std::move(buf).str();
}

// Splits file contents into lines; a trailing newline does not create an
// extra empty line.
std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) {
      if (begin < text.size()) lines.emplace_back(text.substr(begin));
      break;
    }
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    begin = end + 1;
  }
  return lines;
}

std::string format_doc_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "d%06zu", index);
  return buf;
}

void check_sentence(const std::string& raw, std::string& out, std::size_t line_no) {
  out = text::rtrim(raw);
  std::vector<text::Span> spans = text::whitespace_spans(out);
  if (spans.empty()) throw EmptySentence(line_no);
  std::string_view first(out.data() + spans[0].begin, spans[0].end - spans[0].begin);
  if (text::is_separator_token(first)) throw ReservedPrefix(line_no);
}

}  // namespace

std::size_t Corpus::find(std::string_view doc_id) const {
  for (std::size_t i = 0; i < documents.size(); ++i)
    if (documents[i].doc_id == doc_id) return i;
  return npos;
}

const ParallelDocument& Corpus::require(std::string_view doc_id) const {
  std::size_t i = find(doc_id);
  if (i == npos) throw UnknownDocId(std::string(doc_id));
  return documents[i];
}

BoundaryMismatch::BoundaryMismatch(std::size_t line)
    : ValidationError("document boundary mismatch at line " + std::to_string(line)),
      line_no(line) {}

LengthMismatch::LengthMismatch(std::size_t doc, std::size_t s, std::size_t t)
    : ValidationError("document " + std::to_string(doc) + ": " + std::to_string(s) +
                      " source sentences vs " + std::to_string(t) + " target"),
      doc_index(doc) {}

EmptySentence::EmptySentence(std::size_t line)
    : ValidationError("empty sentence at line " + std::to_string(line)), line_no(line) {}

ReservedPrefix::ReservedPrefix(std::size_t line)
    : ValidationError("sentence at line " + std::to_string(line) +
                      " starts with a reserved #<digits> token"),
      line_no(line) {}

EmptyDocument::EmptyDocument(std::size_t line)
    : ValidationError("empty document at line " + std::to_string(line)), line_no(line) {}

CorpusTooSmall::CorpusTooSmall(std::size_t n)
    : ValidationError("corpus of " + std::to_string(n) + " documents is too small to split") {}

UnknownDocId::UnknownDocId(const std::string& id)
    : ValidationError("unknown doc_id: " + id), doc_id(id) {}

Corpus parse_parallel_corpus_text(std::string_view source_text,
                                  std::string_view target_text,
                                  const LangPair& lang_pair) {
  std::vector<std::string> src_lines = split_lines(source_text);
  std::vector<std::string> tgt_lines = split_lines(target_text);

  // Boundary structure must match line by line, so walk both in lockstep.
  std::size_t n = std::max(src_lines.size(), tgt_lines.size());
  Corpus corpus;
  corpus.lang_pair = lang_pair;
  ParallelDocument cur;
  cur.lang_pair = lang_pair;
  std::size_t doc_start_line = 1;
  bool prev_blank = true;  // file start behaves like a fresh boundary

  auto flush_doc = [&](std::size_t line_no) {
    if (cur.source.empty()) throw EmptyDocument(line_no);
    if (cur.source.size() != cur.target.size())
      throw LengthMismatch(corpus.documents.size(), cur.source.size(), cur.target.size());
    cur.doc_id = format_doc_id(corpus.documents.size());
    corpus.documents.push_back(std::move(cur));
    cur = ParallelDocument{};
    cur.lang_pair = lang_pair;
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t line_no = i + 1;
    bool src_present = i < src_lines.size();
    bool tgt_present = i < tgt_lines.size();
    bool src_blank = !src_present || src_lines[i].empty();
    bool tgt_blank = !tgt_present || tgt_lines[i].empty();
    if (src_blank != tgt_blank) throw BoundaryMismatch(line_no);
    if (src_blank) {
      if (prev_blank) throw EmptyDocument(line_no);
      flush_doc(doc_start_line);
      doc_start_line = line_no + 1;
      prev_blank = true;
      continue;
    }
    if (!src_present || !tgt_present) throw BoundaryMismatch(line_no);
    prev_blank = false;
    std::string src_sent, tgt_sent;
    check_sentence(src_lines[i], src_sent, line_no);
    check_sentence(tgt_lines[i], tgt_sent, line_no);
    cur.source.push_back(std::move(src_sent));
    cur.target.push_back(std::move(tgt_sent));
  }
  if (!cur.source.empty()) {
    flush_doc(doc_start_line);
  } else if (n > 0 && prev_blank) {
    // A blank separator line at EOF announces a document that never arrives.
    throw EmptyDocument(n + 1);
  }
  if (corpus.documents.empty()) throw EmptyDocument(1);
  return corpus;
}

Corpus parse_parallel_corpus(const std::string& source_path,
                             const std::string& target_path,
                             const LangPair& lang_pair) {
  return parse_parallel_corpus_text(read_file(source_path), read_file(target_path), lang_pair);
}

DatasetSplit split_dataset(const Corpus& corpus, std::uint64_t seed,
                           double train_frac, std::size_t dev_docs,
                           std::size_t test_docs) {
  if (!(train_frac > 0.0) || !(train_frac < 1.0))
    throw ValidationError("train fraction must lie strictly between 0 and 1");
  std::size_t n = corpus.documents.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  prng::deterministic_shuffle(order, seed);

  // The fractions are exact in intent ("80%") but inexact in binary, so
  // nudge before flooring; 0.1 * 10 must be 1, not 0.999... floored to 0.
  auto floor_frac = [](double x) {
    return static_cast<std::size_t>(std::floor(x + 1e-9));
  };
  std::size_t n_train = floor_frac(train_frac * static_cast<double>(n));
  std::size_t pool = floor_frac((1.0 - train_frac) / 2.0 * static_cast<double>(n));
  if (n_train == 0 || pool == 0) throw CorpusTooSmall(n);

  DatasetSplit split;
  split.seed = seed;
  auto id_at = [&](std::size_t i) { return corpus.documents[order[i]].doc_id; };
  std::size_t at = 0;
  for (std::size_t i = 0; i < n_train; ++i) split.train.push_back(id_at(at++));
  std::size_t dev_keep = std::min(dev_docs, pool);
  for (std::size_t i = 0; i < pool; ++i) {
    (i < dev_keep ? split.dev : split.discarded).push_back(id_at(at++));
  }
  std::size_t test_keep = std::min(test_docs, pool);
  for (std::size_t i = 0; i < pool; ++i) {
    (i < test_keep ? split.test : split.discarded).push_back(id_at(at++));
  }
  while (at < n) split.discarded.push_back(id_at(at++));
  return split;
}

std::vector<SplitStatsRow> corpus_stats(const Corpus& corpus, const DatasetSplit& split) {
  auto count = [&](const std::vector<std::string>& ids, const char* name) {
    SplitStatsRow row;
    row.split = name;
    row.docs = ids.size();
    for (const auto& id : ids) row.sentences += corpus.require(id).size();
    return row;
  };
  std::vector<SplitStatsRow> rows;
  rows.push_back(count(split.train, "train"));
  rows.push_back(count(split.dev, "dev"));
  rows.push_back(count(split.test, "test"));
  rows.push_back(count(split.discarded, "discarded"));
  SplitStatsRow total;
  total.split = "total";
  for (const auto& r : rows) {
    total.docs += r.docs;
    total.sentences += r.sentences;
  }
  rows.push_back(total);
  return rows;
}

std::string render_stats_text(const std::vector<SplitStatsRow>& rows) {
  std::ostringstream out;
  out << "split           #DOC      #SENT\n";
  for (const auto& r : rows) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-12s %7zu %10zu\n", r.split.c_str(), r.docs,
                  r.sentences);
    out << buf;
  }
  return std::move(out).str();
}

std::string render_stats_csv(const std::vector<SplitStatsRow>& rows) {
  std::ostringstream out;
  out << "split,docs,sentences\r\n";
  for (const auto& r : rows)
    out << r.split << ',' << r.docs << ',' << r.sentences << "\r\n";
  return std::move(out).str();
}

std::string render_stats_json(const std::vector<SplitStatsRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json obj;
    obj["split"] = r.split;
    obj["docs"] = r.docs;
    obj["sentences"] = r.sentences;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void save_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = doc.doc_id;
    obj["src_lang"] = doc.lang_pair.src;
    obj["tgt_lang"] = doc.lang_pair.tgt;
    obj["source"] = doc.source;
    obj["target"] = doc.target;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("corpus write failed");
}

Corpus load_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    ParallelDocument doc;
    try {
      doc.doc_id = obj.at("doc_id").get<std::string>();
      doc.lang_pair.src = obj.at("src_lang").get<std::string>();
      doc.lang_pair.tgt = obj.at("tgt_lang").get<std::string>();
      doc.source = obj.at("source").get<std::vector<std::string>>();
      doc.target = obj.at("target").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    if (doc.source.size() != doc.target.size())
      throw LengthMismatch(corpus.documents.size(), doc.source.size(), doc.target.size());
    if (doc.source.empty()) throw EmptyDocument(line_no);
    if (corpus.documents.empty()) corpus.lang_pair = doc.lang_pair;
    corpus.documents.push_back(std::move(doc));
  }
  if (in.bad()) throw IoError("corpus read failed");
  return corpus;
}

void save_split(const DatasetSplit& split, std::ostream& out) {
  nlohmann::ordered_json obj;
  obj["seed"] = split.seed;
  obj["train"] = split.train;
  obj["dev"] = split.dev;
  obj["test"] = split.test;
  obj["discarded"] = split.discarded;
  out << obj.dump(2) << '\n';
  if (!out) throw IoError("split write failed");
}

DatasetSplit load_split(std::istream& in) {
  nlohmann::ordered_json obj;
  try {
    obj = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("split file: ") + e.what());
  }
  DatasetSplit split;
  try {
    split.seed = obj.at("seed").get<std::uint64_t>();
    split.train = obj.at("train").get<std::vector<std::string>>();
    split.dev = obj.at("dev").get<std::vector<std::string>>();
    split.test = obj.at("test").get<std::vector<std::string>>();
    split.discarded = obj.at("discarded").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("split file: ") + e.what());
  }
  return split;
}

}  // namespace docmt::corpus
