#pragma once

#include <cstdint>
#include <vector>

#include "docmt/corpus.hpp"
#include "docmt/metrics.hpp"
#include "docmt/segment.hpp"

namespace docmt::sim {

// Degrades reference translations the way an imperfect document-level model
// would: occasionally the tail of a document goes missing, and tokens can be
// substituted. Used to validate the coverage analyzer against known rates.
struct SimulatorConfig {
  double tail_drop_prob = 0.0;  // per-document probability of losing sentences
  double drop_one_prob = 0.5;   // given a drop, P(one sentence); else two
  double noise = 0.0;           // per-token substitution rate, separators exempt
  bool drop_anywhere = false;   // drop random positions instead of the tail
  std::uint64_t seed = 0;
};

// One hypothesis record per plan segment, in plan order. Each plan draws an
// independent PRNG substream keyed by its position, so results do not depend
// on evaluation order. Dropped sentences vanish from the rendering while the
// survivors keep their original separator indices; the drop count is clamped
// so at least one sentence of the document survives. With `plans` empty,
// every corpus document is rendered whole as a single segment.
std::vector<metrics::HypRecord> simulate_outputs(const corpus::Corpus& corpus,
                                                 const std::vector<seg::DocumentPlan>& plans,
                                                 const SimulatorConfig& cfg);

}  // namespace docmt::sim
