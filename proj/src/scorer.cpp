#include "docmt/scorer.hpp"

#include <atomic>
#include <cmath>
#include <istream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "docmt/subprocess.hpp"

namespace docmt::scorer {

namespace {

std::string request_json(const ScorerRequest& pair) {
  nlohmann::ordered_json obj;
  obj["src"] = pair.src;
  obj["mt"] = pair.mt;
  obj["ref"] = pair.ref;
  return obj.dump();
}

double parse_score_value(const nlohmann::json& value, std::size_t line_no) {
  if (!value.is_object() || !value.contains("score") || !value["score"].is_number())
    throw MalformedResponse(line_no, "expected an object with a numeric \"score\"");
  const double score = value["score"].get<double>();
  if (!std::isfinite(score)) throw MalformedResponse(line_no, "score is not finite");
  return score;
}

double mean(const std::vector<double>& scores) {
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

}  // namespace

EndpointFailure::EndpointFailure(const std::string& detail)
    : IoError("scorer endpoint failed: " + detail) {}

MalformedResponse::MalformedResponse(std::size_t line, const std::string& detail)
    : IoError("malformed scorer response at line " + std::to_string(line) + ": " + detail),
      line_no(line) {}

CountMismatch::CountMismatch(std::size_t expected, std::size_t got)
    : IoError("scorer returned " + std::to_string(got) + " scores for " +
              std::to_string(expected) + " requests") {}

ScorerResult score_subprocess(const std::vector<ScorerRequest>& pairs,
                              const std::string& command) {
  if (pairs.empty()) throw ValidationError("nothing to score");
  Subprocess proc(command);

  // Requests stream from their own thread; with both pipes full a
  // single-threaded write-all-then-read would deadlock against a scorer that
  // answers as it reads.
  std::atomic<bool> write_ok{true};
  std::thread writer([&] {
    for (const auto& pair : pairs) {
      if (!proc.write_line(request_json(pair))) {
        write_ok = false;
        break;
      }
    }
    proc.close_stdin();
  });

  ScorerResult result;
  try {
    std::string line;
    std::size_t line_no = 0;
    while (result.scores.size() < pairs.size() && proc.read_line(line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json value;
      try {
        value = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw MalformedResponse(line_no, "not valid JSON");
      }
      result.scores.push_back(parse_score_value(value, line_no));
    }
    // Anything after the expected count is a protocol violation too.
    if (result.scores.size() == pairs.size()) {
      std::string extra;
      while (proc.read_line(extra)) {
        if (!extra.empty()) throw CountMismatch(pairs.size(), pairs.size() + 1);
      }
    }
  } catch (...) {
    proc.kill();
    writer.join();
    throw;
  }
  writer.join();

  const int exit_code = proc.wait();
  if (exit_code != 0)
    throw EndpointFailure(command + " exited with code " + std::to_string(exit_code));
  if (!write_ok && result.scores.size() < pairs.size())
    throw EndpointFailure(command + " stopped reading requests");
  if (result.scores.size() != pairs.size())
    throw CountMismatch(pairs.size(), result.scores.size());

  result.system = mean(result.scores);
  return result;
}

ScorerResult score_http(const std::vector<ScorerRequest>& pairs, const std::string& url) {
  if (pairs.empty()) throw ValidationError("nothing to score");
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("not a valid URL: " + url);
  const std::size_t path_begin = url.find('/', scheme_end + 3);
  const std::string base = path_begin == std::string::npos ? url : url.substr(0, path_begin);
  const std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

  nlohmann::ordered_json body = nlohmann::ordered_json::array();
  for (const auto& pair : pairs) {
    nlohmann::ordered_json obj;
    obj["src"] = pair.src;
    obj["mt"] = pair.mt;
    obj["ref"] = pair.ref;
    body.push_back(std::move(obj));
  }

  httplib::Client client(base);
  client.set_read_timeout(300, 0);
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) throw EndpointFailure(url + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw EndpointFailure(url + ": HTTP " + std::to_string(res->status));

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse(1, "response body is not valid JSON");
  }
  if (!reply.is_array()) throw MalformedResponse(1, "response body is not a JSON array");
  if (reply.size() != pairs.size()) throw CountMismatch(pairs.size(), reply.size());

  ScorerResult result;
  result.scores.reserve(reply.size());
  for (std::size_t i = 0; i < reply.size(); ++i)
    result.scores.push_back(parse_score_value(reply[i], i + 1));
  result.system = mean(result.scores);
  return result;
}

ScorerResult score_external(const std::vector<ScorerRequest>& pairs,
                            const std::string& endpoint) {
  if (endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0)
    return score_http(pairs, endpoint);
  return score_subprocess(pairs, endpoint);
}

std::vector<ScorerRequest> load_pairs(std::istream& in) {
  std::vector<ScorerRequest> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("pair line " + std::to_string(line_no) + ": " + e.what());
    }
    ScorerRequest pair;
    try {
      pair.src = obj.at("src").get<std::string>();
      pair.mt = obj.at("mt").get<std::string>();
      pair.ref = obj.at("ref").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("pair line " + std::to_string(line_no) + ": " + e.what());
    }
    pairs.push_back(std::move(pair));
  }
  if (in.bad()) throw IoError("pair read failed");
  return pairs;
}

std::string render_scores_json(const ScorerResult& result) {
  nlohmann::ordered_json obj;
  obj["system"] = result.system;
  obj["scores"] = result.scores;
  return obj.dump(2) + "\n";
}

}  // namespace docmt::scorer
