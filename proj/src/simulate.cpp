#include "docmt/simulate.hpp"

#include <set>

#include "docmt/prng.hpp"
#include "docmt/text.hpp"

namespace docmt::sim {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

std::string with_noise(const std::string& sentence, double noise, prng::SplitMix64& rng) {
  std::string out;
  for (const auto& span : text::whitespace_spans(sentence)) {
    if (!out.empty()) out += ' ';
    if (rng.unit() < noise)
      out += "<unk>";
    else
      out.append(sentence, span.begin, span.end - span.begin);
  }
  return out;
}

}  // namespace

std::vector<metrics::HypRecord> simulate_outputs(const corpus::Corpus& corpus,
                                                 const std::vector<seg::DocumentPlan>& plans,
                                                 const SimulatorConfig& cfg) {
  check_probability(cfg.tail_drop_prob, "tail_drop_prob");
  check_probability(cfg.drop_one_prob, "drop_one_prob");
  check_probability(cfg.noise, "noise");

  std::vector<seg::DocumentPlan> whole;
  const std::vector<seg::DocumentPlan>* active = &plans;
  if (plans.empty()) {
    whole.reserve(corpus.documents.size());
    for (const auto& doc : corpus.documents) {
      seg::DocumentPlan plan;
      plan.doc_id = doc.doc_id;
      seg::Segment segment;
      segment.end = doc.size();
      plan.segments.push_back(segment);
      whole.push_back(std::move(plan));
    }
    active = &whole;
  }

  std::vector<metrics::HypRecord> hyps;
  for (std::size_t p = 0; p < active->size(); ++p) {
    const auto& plan = (*active)[p];
    const auto& doc = corpus.require(plan.doc_id);
    prng::SplitMix64 rng = prng::substream(cfg.seed, p);

    std::set<std::size_t> dropped;
    if (rng.unit() < cfg.tail_drop_prob && doc.size() > 1) {
      std::size_t d = rng.unit() < cfg.drop_one_prob ? 1 : 2;
      d = std::min(d, doc.size() - 1);
      if (cfg.drop_anywhere) {
        std::size_t first = rng.below(doc.size());
        dropped.insert(first);
        if (d == 2) {
          std::size_t second = rng.below(doc.size() - 1);
          if (second >= first) ++second;
          dropped.insert(second);
        }
      } else {
        for (std::size_t i = doc.size() - d; i < doc.size(); ++i) dropped.insert(i);
      }
    }

    for (const auto& segment : plan.segments) {
      if (segment.end > doc.size() || segment.start >= segment.end)
        throw ValidationError("plan segment out of range for document " + plan.doc_id);
      std::string generated;
      for (std::size_t i = segment.start; i < segment.end; ++i) {
        if (dropped.count(i)) continue;
        if (!generated.empty()) generated += ' ';
        generated += '#';
        generated += std::to_string(i - segment.start + 1);
        generated += ' ';
        generated += cfg.noise > 0.0 ? with_noise(doc.target[i], cfg.noise, rng)
                                     : doc.target[i];
      }
      metrics::HypRecord hyp;
      hyp.doc_id = plan.doc_id;
      hyp.generated = std::move(generated);
      hyp.start = segment.start;
      hyp.end = segment.end;
      hyp.expected = segment.end - segment.start;
      hyps.push_back(std::move(hyp));
    }
  }
  return hyps;
}

}  // namespace docmt::sim
