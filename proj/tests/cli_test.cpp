#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "docmt/subprocess.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::vector<std::string> lines;

  std::string text() const {
    std::string out;
    for (const auto& line : lines) {
      out += line;
      out += '\n';
    }
    return out;
  }
};

const std::string& cli_bin() {
  static const std::string bin = [] {
    const char* path = std::getenv("DOCMT_CLI_BIN");
    REQUIRE(path != nullptr);
    return std::string(path);
  }();
  return bin;
}

const std::string& stub_scorer() {
  static const std::string bin = [] {
    const char* path = std::getenv("DOCMT_STUB_SCORER");
    REQUIRE(path != nullptr);
    return std::string(path);
  }();
  return bin;
}

CliResult run_cli(const std::string& args) {
  docmt::Subprocess proc(cli_bin() + " " + args);
  proc.close_stdin();
  CliResult result;
  std::string line;
  while (proc.read_line(line)) result.lines.push_back(line);
  result.code = proc.wait();
  return result;
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("docmt_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

void write_file(const std::string& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  out << content;
  REQUIRE(out.good());
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

std::vector<nlohmann::json> read_jsonl(const std::string& file) {
  std::ifstream in(file);
  REQUIRE(in.good());
  std::vector<nlohmann::json> rows;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(nlohmann::json::parse(line));
  return rows;
}

// 10 documents of 3 sentences each, written once per process.
void ensure_corpus() {
  static const bool done = [] {
    std::string src, tgt;
    for (int d = 0; d < 10; ++d) {
      if (d) {
        src += '\n';
        tgt += '\n';
      }
      for (int s = 0; s < 3; ++s) {
        src += "quelle satz " + std::to_string(d) + " " + std::to_string(s) + "\n";
        tgt += "target line " + std::to_string(d) + " " + std::to_string(s) + "\n";
      }
    }
    write_file(path("src.txt"), src);
    write_file(path("tgt.txt"), tgt);
    CliResult ingest = run_cli("ingest --src " + path("src.txt") + " --tgt " +
                               path("tgt.txt") +
                               " --src-lang de --tgt-lang en --out " + path("corpus.jsonl"));
    REQUIRE(ingest.code == 0);
    CliResult split = run_cli("split --corpus " + path("corpus.jsonl") +
                              " --seed 3 --out " + path("split.json"));
    REQUIRE(split.code == 0);
    return true;
  }();
  (void)done;
}

}  // namespace

TEST_CASE("version flag") {
  CliResult r = run_cli("--version");
  CHECK(r.code == 0);
  REQUIRE(r.lines.size() == 1);
  CHECK(r.lines[0] == "docmt 1.0.0");
}

TEST_CASE("ingest writes one JSON document per corpus document") {
  ensure_corpus();
  auto rows = read_jsonl(path("corpus.jsonl"));
  REQUIRE(rows.size() == 10);
  CHECK(rows[0]["doc_id"] == "d000000");
  CHECK(rows[0]["src_lang"] == "de");
  CHECK(rows[0]["source"].size() == 3);
  CHECK(rows[9]["doc_id"] == "d000009");
}

TEST_CASE("split is sized and reproducible") {
  ensure_corpus();
  auto split = nlohmann::json::parse(read_file(path("split.json")));
  CHECK(split["seed"] == 3);
  CHECK(split["train"].size() == 8);
  CHECK(split["dev"].size() == 1);
  CHECK(split["test"].size() == 1);
  CHECK(split["discarded"].size() == 0);

  CliResult again = run_cli("split --corpus " + path("corpus.jsonl") +
                            " --seed 3 --out " + path("split_again.json"));
  REQUIRE(again.code == 0);
  CHECK(read_file(path("split_again.json")) == read_file(path("split.json")));

  CliResult other = run_cli("split --corpus " + path("corpus.jsonl") +
                            " --seed 4 --out " + path("split_other.json"));
  REQUIRE(other.code == 0);
  CHECK(read_file(path("split_other.json")) != read_file(path("split.json")));
}

TEST_CASE("stats formats") {
  ensure_corpus();
  CliResult text = run_cli("stats --corpus " + path("corpus.jsonl") + " --split " +
                           path("split.json"));
  REQUIRE(text.code == 0);
  REQUIRE(!text.lines.empty());
  CHECK(text.lines[0] == "split           #DOC      #SENT");
  CHECK(text.text().find("train") != std::string::npos);
  CHECK(text.text().find("total") != std::string::npos);

  CliResult csv = run_cli("stats --corpus " + path("corpus.jsonl") + " --split " +
                          path("split.json") + " --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.lines[0] == "split,docs,sentences");
  CHECK(csv.text().find("train,8,24") != std::string::npos);

  CliResult json = run_cli("stats --corpus " + path("corpus.jsonl") + " --split " +
                           path("split.json") + " --format json --out " +
                           path("stats.json"));
  REQUIRE(json.code == 0);
  auto rows = nlohmann::json::parse(read_file(path("stats.json")));
  REQUIRE(rows.is_array());
  CHECK(rows[0]["split"] == "train");
  CHECK(rows[0]["docs"] == 8);
}

TEST_CASE("segment emits one plan per document and budget") {
  ensure_corpus();
  CliResult r = run_cli("segment --corpus " + path("corpus.jsonl") +
                        " --lengths 8,16 --out " + path("plans.jsonl"));
  REQUIRE(r.code == 0);
  auto plans = read_jsonl(path("plans.jsonl"));
  REQUIRE(plans.size() == 20);
  CHECK(plans[0]["L"] == 8);
  CHECK(plans[0]["doc_id"] == "d000000");
  CHECK(plans[0]["segments"].is_array());
  CHECK(plans[10]["L"] == 16);

  SUBCASE("default budgets") {
    CliResult def = run_cli("segment --corpus " + path("corpus.jsonl") + " --out " +
                            path("plans_default.jsonl"));
    REQUIRE(def.code == 0);
    CHECK(read_jsonl(path("plans_default.jsonl")).size() == 40);
  }
}

TEST_CASE("build-instructions assembles the mixed set") {
  ensure_corpus();
  CliResult r = run_cli("build-instructions --corpus " + path("corpus.jsonl") +
                        " --split " + path("split.json") +
                        " --lengths 8,16 --strategy replicate --seed 5 --out " +
                        path("records.jsonl"));
  REQUIRE(r.code == 0);
  auto records = read_jsonl(path("records.jsonl"));
  REQUIRE(!records.empty());
  bool saw_doc = false, saw_sent = false;
  for (const auto& rec : records) {
    CHECK(rec.contains("instruction"));
    CHECK(rec.contains("input"));
    CHECK(rec.contains("output"));
    CHECK(rec["meta"].contains("doc_id"));
    if (rec["meta"]["L"].is_string()) {
      CHECK(rec["meta"]["L"] == "SENT");
      saw_sent = true;
    } else {
      saw_doc = true;
      CHECK(rec["input"].get<std::string>().rfind("#1 ", 0) == 0);
    }
    CHECK(rec["instruction"] ==
          "Translate the following text from German to English.");
  }
  CHECK(saw_doc);
  CHECK(saw_sent);
  // 8 train docs x 3 sentences.
  std::size_t sent_count = 0;
  for (const auto& rec : records)
    if (rec["meta"]["L"].is_string()) ++sent_count;
  CHECK(sent_count == 24);

  SUBCASE("documents only") {
    CliResult doc_only = run_cli("build-instructions --corpus " + path("corpus.jsonl") +
                                 " --split " + path("split.json") +
                                 " --lengths 8 --no-sentence-level --out " +
                                 path("records_doc.jsonl"));
    REQUIRE(doc_only.code == 0);
    for (const auto& rec : read_jsonl(path("records_doc.jsonl")))
      CHECK(rec["meta"]["L"].is_number());
  }
}

TEST_CASE("render-prompts wraps records in the prompt frame") {
  ensure_corpus();
  run_cli("build-instructions --corpus " + path("corpus.jsonl") + " --split " +
          path("split.json") + " --lengths 16 --out " + path("records2.jsonl"));
  CliResult r = run_cli("render-prompts --records " + path("records2.jsonl") +
                        " --out " + path("prompts.jsonl"));
  REQUIRE(r.code == 0);
  auto prompts = read_jsonl(path("prompts.jsonl"));
  REQUIRE(!prompts.empty());
  CHECK(prompts.size() == read_jsonl(path("records2.jsonl")).size());
  for (const auto& p : prompts) {
    std::string prompt = p["prompt"].get<std::string>();
    CHECK(prompt.rfind("### Instruction:\n", 0) == 0);
    CHECK(prompt.find("\n\n### Input:\n") != std::string::npos);
    std::string tail = "\n\n### Response:\ntext:";
    CHECK(prompt.substr(prompt.size() - tail.size()) == tail);
  }
}

TEST_CASE("simulate at zero drop round-trips through the evaluators") {
  ensure_corpus();
  CliResult sim = run_cli("simulate --corpus " + path("corpus.jsonl") + " --out " +
                          path("hyps.jsonl"));
  REQUIRE(sim.code == 0);
  auto hyps = read_jsonl(path("hyps.jsonl"));
  REQUIRE(hyps.size() == 10);
  CHECK(hyps[0]["generated"].get<std::string>().rfind("#1 ", 0) == 0);
  CHECK(hyps[0]["expected"] == 3);

  CliResult cov = run_cli("eval coverage --hyps " + path("hyps.jsonl") + " --refs " +
                          path("corpus.jsonl") + " --format json --out " +
                          path("coverage.json"));
  REQUIRE(cov.code == 0);
  CHECK(nlohmann::json::parse(read_file(path("coverage.json")))["corpus_accuracy"] == 100.0);

  CliResult db = run_cli("eval dbleu --hyps " + path("hyps.jsonl") + " --refs " +
                         path("corpus.jsonl") + " --format json --out " +
                         path("dbleu.json"));
  REQUIRE(db.code == 0);
  CHECK(nlohmann::json::parse(read_file(path("dbleu.json")))["score"] == 100.0);

  CliResult sb = run_cli("eval sbleu --hyps " + path("hyps.jsonl") + " --refs " +
                         path("corpus.jsonl") + " --format text");
  REQUIRE(sb.code == 0);
  REQUIRE(!sb.lines.empty());
  CHECK(sb.lines[0].rfind("BLEU = 100.00 ", 0) == 0);
}

TEST_CASE("eval tcp prints one rounded number") {
  CliResult text = run_cli("eval tcp --tc 46.5 --cp 33.8 --pt 63.5");
  CHECK(text.code == 0);
  REQUIRE(text.lines.size() == 1);
  CHECK(text.lines[0] == "46.4");

  CliResult json = run_cli("eval tcp --tc 46.5 --cp 33.8 --pt 63.5 --format json");
  CHECK(json.code == 0);
  auto obj = nlohmann::json::parse(json.text());
  CHECK(obj["tc"] == 46.5);
  double tcp = obj["tcp"].get<double>();
  CHECK(tcp > 46.3);
  CHECK(tcp < 46.45);
}

TEST_CASE("score-external over the stub scorer") {
  std::string pairs;
  for (int i = 0; i < 3; ++i)
    pairs += R"({"src":"s","mt":"m","ref":"r"})" "\n";
  write_file(path("pairs.jsonl"), pairs);
  CliResult r = run_cli("score-external --pairs " + path("pairs.jsonl") +
                        " --endpoint '" + stub_scorer() + " --score 0.5' --out " +
                        path("scores.json"));
  REQUIRE(r.code == 0);
  auto scores = nlohmann::json::parse(read_file(path("scores.json")));
  CHECK(scores["system"] == 0.5);
  CHECK(scores["scores"].size() == 3);
}

TEST_CASE("report merges evaluation outputs") {
  ensure_corpus();
  run_cli("stats --corpus " + path("corpus.jsonl") + " --split " + path("split.json") +
          " --format json --out " + path("stats2.json"));
  run_cli("eval tcp --tc 46.5 --cp 33.8 --pt 63.5 --format json --out " +
          path("tcp.json"));
  CliResult csv = run_cli("report --stats " + path("stats2.json") + " --tcp " +
                          path("tcp.json") + " --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.lines[0] == "section,metric,value");
  CHECK(csv.text().find("train,docs,8") != std::string::npos);
  CHECK(csv.text().find("discourse,tc,46.5") != std::string::npos);

  CliResult text = run_cli("report --stats " + path("stats2.json") + " --tcp " +
                           path("tcp.json"));
  REQUIRE(text.code == 0);
  CHECK(text.lines[0] == "split           #DOC      #SENT");
  CHECK(text.text().find("discourse") != std::string::npos);
}

TEST_CASE("exit codes distinguish validation from io errors") {
  ensure_corpus();
  SUBCASE("validation errors exit 1") {
    write_file(path("bad_src.txt"), "a\n\nb\n");
    write_file(path("bad_tgt.txt"), "x\ny\nz\n");
    CliResult r = run_cli("ingest --src " + path("bad_src.txt") + " --tgt " +
                          path("bad_tgt.txt") + " --src-lang de --tgt-lang en");
    CHECK(r.code == 1);
    CHECK(run_cli("eval tcp --tc 0 --cp 1 --pt 1").code == 1);
  }
  SUBCASE("io errors exit 2") {
    CliResult r = run_cli("ingest --src " + path("missing_file.txt") + " --tgt " +
                          path("missing_too.txt") + " --src-lang de --tgt-lang en");
    CHECK(r.code == 2);
    write_file(path("pairs_one.jsonl"), R"({"src":"s","mt":"m","ref":"r"})" "\n");
    CliResult scorer_fail = run_cli("score-external --pairs " + path("pairs_one.jsonl") +
                                    " --endpoint '" + stub_scorer() + " --exit-code 3'");
    CHECK(scorer_fail.code == 2);
  }
  SUBCASE("usage errors are nonzero") {
    CHECK(run_cli("no-such-command").code != 0);
    CHECK(run_cli("eval").code != 0);
    CHECK(run_cli("split").code != 0);
    CHECK(run_cli("simulate --corpus " + path("corpus.jsonl") + " --subset dev").code ==
          1);
  }
}
