#include "docmt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

#include "docmt/text.hpp"

namespace docmt::metrics {

namespace {

// N-grams are keyed by their tokens joined with an unprintable separator so
// token boundaries cannot collide ("ab"+"c" vs "a"+"bc").
std::string ngram_key(const tok::TokenSequence& tokens, std::size_t at, std::size_t n) {
  std::string key;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key += '\x1f';
    key += tokens[at + i];
  }
  return key;
}

std::unordered_map<std::string, std::size_t> ngram_counts(const tok::TokenSequence& tokens,
                                                          std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[ngram_key(tokens, i, n)];
  return counts;
}

std::string format_double(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace

BleuLengthMismatch::BleuLengthMismatch(std::size_t hyps, std::size_t refs)
    : ValidationError(std::to_string(hyps) + " hypotheses vs " + std::to_string(refs) +
                      " references") {}

EmptyCorpus::EmptyCorpus() : ValidationError("BLEU needs at least one segment") {}

EmptyInput::EmptyInput() : ValidationError("coverage needs at least one generation") {}

NonPositiveInput::NonPositiveInput(const std::string& what)
    : ValidationError(what + " must be positive") {}

BleuScore corpus_bleu(const std::vector<tok::TokenSequence>& hyps,
                      const std::vector<tok::TokenSequence>& refs,
                      std::size_t max_n, Smoothing smoothing) {
  if (hyps.size() != refs.size()) throw BleuLengthMismatch(hyps.size(), refs.size());
  if (hyps.empty()) throw EmptyCorpus();
  if (max_n == 0) throw ValidationError("BLEU order must be at least 1");

  std::vector<std::size_t> match(max_n, 0), total(max_n, 0);
  std::size_t hyp_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const auto& hyp = hyps[i];
    const auto& ref = refs[i];
    hyp_len += hyp.size();
    ref_len += ref.size();
    for (std::size_t n = 1; n <= max_n && n <= hyp.size(); ++n) {
      total[n - 1] += hyp.size() - n + 1;
      auto ref_counts = ngram_counts(ref, n);
      if (ref_counts.empty()) continue;
      for (const auto& [key, count] : ngram_counts(hyp, n)) {
        auto it = ref_counts.find(key);
        if (it != ref_counts.end()) match[n - 1] += std::min(count, it->second);
      }
    }
  }

  BleuScore bleu;
  bleu.precisions.assign(max_n, 0.0);
  bleu.hyp_len = hyp_len;
  bleu.ref_len = ref_len;
  while (bleu.effective_order < max_n && total[bleu.effective_order] > 0)
    ++bleu.effective_order;

  if (hyp_len == 0) {
    bleu.brevity_penalty = 0.0;
    return bleu;
  }

  bool zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= bleu.effective_order; ++n) {
    double m = static_cast<double>(match[n - 1]);
    double t = static_cast<double>(total[n - 1]);
    if (smoothing.kind == Smoothing::Kind::add_k && n > 1) {
      m += smoothing.k;
      t += smoothing.k;
    }
    bleu.precisions[n - 1] = m / t;
    if (m == 0.0)
      zero = true;
    else
      log_sum += std::log(m / t);
  }

  bleu.brevity_penalty =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  if (!zero && bleu.effective_order > 0)
    bleu.score = bleu.brevity_penalty *
                 std::exp(log_sum / static_cast<double>(bleu.effective_order)) * 100.0;
  return bleu;
}

std::string strip_separators(std::string_view text) {
  std::string out;
  for (const auto& span : text::whitespace_spans(text)) {
    std::string_view token = text.substr(span.begin, span.end - span.begin);
    if (text::is_separator_token(token)) continue;
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

BleuScore dbleu(const std::vector<std::string>& doc_hyps,
                const std::vector<std::string>& doc_refs,
                const tok::TokenizerSpec& spec, std::size_t max_n, Smoothing smoothing) {
  if (doc_hyps.size() != doc_refs.size())
    throw BleuLengthMismatch(doc_hyps.size(), doc_refs.size());
  if (doc_hyps.empty()) throw EmptyCorpus();
  tok::Tokenizer tokenizer(spec);
  std::vector<tok::TokenSequence> hyps, refs;
  hyps.reserve(doc_hyps.size());
  refs.reserve(doc_refs.size());
  for (std::size_t i = 0; i < doc_hyps.size(); ++i) {
    hyps.push_back(tokenizer.tokenize(strip_separators(doc_hyps[i])));
    refs.push_back(tokenizer.tokenize(strip_separators(doc_refs[i])));
  }
  return corpus_bleu(hyps, refs, max_n, smoothing);
}

std::map<std::size_t, std::string> recover_sentences(std::string_view generated,
                                                     std::size_t expected) {
  if (expected == 0) throw ValidationError("expected sentence count must be at least 1");
  std::map<std::size_t, std::string> out;
  std::size_t last = 0;
  std::size_t text_begin = 0;
  auto close = [&](std::size_t text_end) {
    if (last == 0) return;
    out[last] = text::trim(generated.substr(text_begin, text_end - text_begin));
  };
  for (const auto& span : text::whitespace_spans(generated)) {
    std::string_view token = generated.substr(span.begin, span.end - span.begin);
    std::uint64_t index = 0;
    if (!text::is_separator_token(token, &index)) continue;
    if (index <= last || index > expected) continue;
    close(span.begin);
    last = static_cast<std::size_t>(index);
    text_begin = span.end;
  }
  close(generated.size());
  return out;
}

CoverageReport coverage(const std::vector<GeneratedDoc>& outputs) {
  if (outputs.empty()) throw EmptyInput();
  CoverageReport report;
  std::size_t full_count = 0;
  for (const auto& doc : outputs) {
    DocCoverage cov;
    cov.doc_id = doc.doc_id;
    cov.expected = doc.expected;
    auto recovered = recover_sentences(doc.generated, doc.expected);
    for (const auto& [index, sentence] : recovered) {
      (void)sentence;
      cov.recovered.push_back(index);
    }
    for (std::size_t k = 1; k <= doc.expected; ++k)
      if (!recovered.count(k)) cov.missing.push_back(k);
    cov.full = cov.missing.empty();
    if (cov.full) ++full_count;
    report.per_doc.push_back(std::move(cov));
  }
  report.corpus_accuracy =
      100.0 * static_cast<double>(full_count) / static_cast<double>(outputs.size());
  return report;
}

double tcp(double tc, double cp, double pt) {
  if (!(tc > 0.0)) throw NonPositiveInput("tc");
  if (!(cp > 0.0)) throw NonPositiveInput("cp");
  if (!(pt > 0.0)) throw NonPositiveInput("pt");
  return std::cbrt(tc * cp * pt);
}

BleuScore sbleu_from_documents(const std::vector<GeneratedDoc>& outputs,
                               const std::vector<std::vector<std::string>>& refs,
                               const tok::TokenizerSpec& spec, std::size_t max_n,
                               Smoothing smoothing) {
  if (outputs.size() != refs.size()) throw BleuLengthMismatch(outputs.size(), refs.size());
  if (outputs.empty()) throw EmptyCorpus();
  tok::Tokenizer tokenizer(spec);
  std::vector<tok::TokenSequence> hyp_tokens, ref_tokens;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (refs[i].size() != outputs[i].expected)
      throw ValidationError("document " + outputs[i].doc_id + " expects " +
                            std::to_string(outputs[i].expected) + " sentences but has " +
                            std::to_string(refs[i].size()) + " references");
    auto recovered = recover_sentences(outputs[i].generated, outputs[i].expected);
    for (std::size_t k = 1; k <= outputs[i].expected; ++k) {
      auto it = recovered.find(k);
      hyp_tokens.push_back(it == recovered.end() ? tok::TokenSequence{}
                                                 : tokenizer.tokenize(it->second));
      ref_tokens.push_back(tokenizer.tokenize(refs[i][k - 1]));
    }
  }
  return corpus_bleu(hyp_tokens, ref_tokens, max_n, smoothing);
}

void save_hyps(const std::vector<HypRecord>& hyps, std::ostream& out) {
  for (const auto& hyp : hyps) {
    nlohmann::ordered_json obj;
    obj["doc_id"] = hyp.doc_id;
    obj["generated"] = hyp.generated;
    if (hyp.start) obj["start"] = *hyp.start;
    if (hyp.end) obj["end"] = *hyp.end;
    if (hyp.expected) obj["expected"] = *hyp.expected;
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("hypothesis write failed");
}

std::vector<HypRecord> load_hyps(std::istream& in) {
  std::vector<HypRecord> hyps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("hypothesis line " + std::to_string(line_no) + ": " + e.what());
    }
    HypRecord hyp;
    try {
      hyp.doc_id = obj.at("doc_id").get<std::string>();
      hyp.generated = obj.at("generated").get<std::string>();
      if (obj.contains("start")) hyp.start = obj.at("start").get<std::size_t>();
      if (obj.contains("end")) hyp.end = obj.at("end").get<std::size_t>();
      if (obj.contains("expected")) hyp.expected = obj.at("expected").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("hypothesis line " + std::to_string(line_no) + ": " + e.what());
    }
    hyps.push_back(std::move(hyp));
  }
  if (in.bad()) throw IoError("hypothesis read failed");
  return hyps;
}

std::string render_bleu_json(const BleuScore& bleu) {
  nlohmann::ordered_json obj;
  obj["score"] = bleu.score;
  obj["precisions"] = bleu.precisions;
  obj["brevity_penalty"] = bleu.brevity_penalty;
  obj["hyp_len"] = bleu.hyp_len;
  obj["ref_len"] = bleu.ref_len;
  obj["effective_order"] = bleu.effective_order;
  return obj.dump(2) + "\n";
}

std::string render_bleu_text(const BleuScore& bleu) {
  std::string out = "BLEU = " + format_double(bleu.score, 2) + " ";
  for (std::size_t n = 0; n < bleu.precisions.size(); ++n) {
    if (n) out += '/';
    out += format_double(bleu.precisions[n] * 100.0, 1);
  }
  out += " (BP = " + format_double(bleu.brevity_penalty, 3);
  out += ", hyp_len = " + std::to_string(bleu.hyp_len);
  out += ", ref_len = " + std::to_string(bleu.ref_len) + ")\n";
  return out;
}

std::string render_coverage_json(const CoverageReport& report) {
  nlohmann::ordered_json obj;
  obj["corpus_accuracy"] = report.corpus_accuracy;
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (const auto& doc : report.per_doc) {
    nlohmann::ordered_json d;
    d["doc_id"] = doc.doc_id;
    d["expected"] = doc.expected;
    d["recovered"] = doc.recovered;
    d["missing"] = doc.missing;
    d["full"] = doc.full;
    docs.push_back(std::move(d));
  }
  obj["docs"] = std::move(docs);
  return obj.dump(2) + "\n";
}

std::string render_coverage_text(const CoverageReport& report) {
  std::string out;
  std::size_t full_count = 0;
  for (const auto& doc : report.per_doc) {
    if (doc.full) {
      ++full_count;
      continue;
    }
    out += doc.doc_id + ": recovered " + std::to_string(doc.recovered.size()) + "/" +
           std::to_string(doc.expected) + ", missing";
    for (std::size_t k : doc.missing) out += " " + std::to_string(k);
    out += '\n';
  }
  out += "coverage = " + format_double(report.corpus_accuracy, 1) + "% (" +
         std::to_string(full_count) + "/" + std::to_string(report.per_doc.size()) +
         " documents fully recovered)\n";
  return out;
}

}  // namespace docmt::metrics
