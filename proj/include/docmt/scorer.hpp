#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "docmt/error.hpp"

namespace docmt::scorer {

// One segment to score, in the shape quality-estimation services expect.
struct ScorerRequest {
  std::string src;
  std::string mt;
  std::string ref;
};

struct ScorerResult {
  std::vector<double> scores;  // one per request, in request order
  double system = 0.0;         // arithmetic mean
};

class EndpointFailure : public IoError {
 public:
  explicit EndpointFailure(const std::string& detail);
};

class MalformedResponse : public IoError {
 public:
  MalformedResponse(std::size_t line, const std::string& detail);
  std::size_t line_no;  // 1-based response line (or array index)
};

class CountMismatch : public IoError {
 public:
  CountMismatch(std::size_t expected, std::size_t got);
};

// Subprocess protocol: one JSON object {"src","mt","ref"} per stdin line, one
// JSON object {"score": real} per stdout line, same order. Requests are
// written from a separate thread so large batches cannot deadlock on full
// pipes.
ScorerResult score_subprocess(const std::vector<ScorerRequest>& pairs,
                              const std::string& command);

// HTTP protocol: POST the full request list as a JSON array to the URL,
// expect a JSON array of {"score": real} of the same length.
ScorerResult score_http(const std::vector<ScorerRequest>& pairs, const std::string& url);

// Dispatches on the endpoint: http:// or https:// URLs go over HTTP,
// anything else runs as a shell command.
ScorerResult score_external(const std::vector<ScorerRequest>& pairs,
                            const std::string& endpoint);

// JSONL {"src":..,"mt":..,"ref":..}, one pair per line.
std::vector<ScorerRequest> load_pairs(std::istream& in);

std::string render_scores_json(const ScorerResult& result);

}  // namespace docmt::scorer
