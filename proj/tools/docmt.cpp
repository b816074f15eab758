#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "docmt/corpus.hpp"
#include "docmt/error.hpp"
#include "docmt/instruct.hpp"
#include "docmt/metrics.hpp"
#include "docmt/report.hpp"
#include "docmt/scorer.hpp"
#include "docmt/segment.hpp"
#include "docmt/simulate.hpp"
#include "docmt/text.hpp"
#include "docmt/tokenizer.hpp"

namespace {

using namespace docmt;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string tokenizer = "whitespace";
  std::vector<std::size_t> lengths = {512, 1024, 1536, 2048};
  std::string strategy = "partition";
  unsigned workers = 0;  // 0 = one per hardware thread

  tok::TokenizerSpec tokenizer_spec() const { return tok::TokenizerSpec::parse_flag(tokenizer); }
  unsigned worker_count() const {
    if (workers > 0) return workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::string read_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return std::move(buf).str();
}

// Data goes to --out when given, stdout otherwise; diagnostics stay on stderr.
void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw IoError("stdout write failed");
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + out_path);
  out << data;
  out.flush();
  if (!out) throw IoError("write failed: " + out_path);
}

corpus::Corpus load_corpus_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return corpus::load_corpus(in);
}

corpus::DatasetSplit load_split_file(const std::string& path) {
  std::ifstream in = open_input(path);
  return corpus::load_split(in);
}

const std::vector<std::string>& subset_ids(const corpus::DatasetSplit& split,
                                           const std::string& subset) {
  if (subset == "train") return split.train;
  if (subset == "dev") return split.dev;
  if (subset == "test") return split.test;
  throw ValidationError("unknown subset: " + subset);
}

corpus::Corpus select_documents(const corpus::Corpus& corpus,
                                const std::vector<std::string>& ids) {
  corpus::Corpus out;
  out.lang_pair = corpus.lang_pair;
  out.documents.reserve(ids.size());
  for (const auto& id : ids) out.documents.push_back(corpus.require(id));
  return out;
}

// A hypothesis record resolved against its reference document.
struct ResolvedHyp {
  const metrics::HypRecord* record = nullptr;
  std::size_t start = 0;
  std::size_t end = 0;
};

struct DocHyps {
  const corpus::ParallelDocument* doc = nullptr;
  std::vector<ResolvedHyp> records;
};

// grouped holds pointers into refs and hyps, so all three must stay together.
struct LoadedEval {
  corpus::Corpus refs;
  std::vector<metrics::HypRecord> hyps;
  std::vector<DocHyps> grouped;
};

std::vector<DocHyps> group_hyps(const corpus::Corpus& refs,
                                const std::vector<metrics::HypRecord>& hyps) {
  std::map<std::string_view, std::size_t> index;
  std::vector<DocHyps> grouped(refs.documents.size());
  for (std::size_t i = 0; i < refs.documents.size(); ++i) {
    index[refs.documents[i].doc_id] = i;
    grouped[i].doc = &refs.documents[i];
  }
  for (const auto& hyp : hyps) {
    auto it = index.find(hyp.doc_id);
    if (it == index.end()) throw corpus::UnknownDocId(hyp.doc_id);
    const auto& doc = refs.documents[it->second];
    ResolvedHyp resolved;
    resolved.record = &hyp;
    resolved.start = hyp.start.value_or(0);
    resolved.end = hyp.end.value_or(doc.size());
    if (resolved.start >= resolved.end || resolved.end > doc.size())
      throw ValidationError("hypothesis range [" + std::to_string(resolved.start) + ", " +
                            std::to_string(resolved.end) + ") is invalid for " +
                            hyp.doc_id);
    if (hyp.expected && *hyp.expected != resolved.end - resolved.start)
      throw ValidationError("hypothesis for " + hyp.doc_id + " declares " +
                            std::to_string(*hyp.expected) + " sentences but spans " +
                            std::to_string(resolved.end - resolved.start));
    grouped[it->second].records.push_back(resolved);
  }
  for (auto& group : grouped) {
    std::stable_sort(group.records.begin(), group.records.end(),
                     [](const ResolvedHyp& a, const ResolvedHyp& b) {
                       return a.start < b.start;
                     });
    if (group.records.empty()) {
      std::cerr << "warning: no hypothesis for " << group.doc->doc_id
                << "; scoring it as empty\n";
      continue;
    }
    std::size_t covered = 0;
    for (const auto& r : group.records) covered += r.end - r.start;
    if (covered != group.doc->size())
      std::cerr << "warning: hypotheses for " << group.doc->doc_id << " cover " << covered
                << " of " << group.doc->size() << " sentences\n";
  }
  return grouped;
}

metrics::Smoothing smoothing_from_flags(const std::string& name, double k) {
  if (name == "none") return metrics::Smoothing::none();
  if (name == "add-k") return metrics::Smoothing::add_k(k);
  throw ValidationError("unknown smoothing: " + name);
}

inst::PromptTemplate template_from_flags(const std::string& header,
                                         const std::string& response_prefix,
                                         const std::vector<std::string>& lang_names) {
  inst::PromptTemplate tmpl;
  if (!header.empty()) tmpl.header = header;
  tmpl.response_prefix = response_prefix;
  for (const auto& entry : lang_names) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
      throw ValidationError("--lang-name expects code=Name, got: " + entry);
    tmpl.language_names[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return tmpl;
}

int run(int argc, char** argv) {
  CLI::App app{"Builds mixed sentence/document translation-instruction datasets and "
               "evaluates document-level MT output."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "docmt 1.0.0");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "PRNG seed for splits, schedules and shuffles");
  app.add_option("--tokenizer", global.tokenizer,
                 "whitespace | intl | char-cjk | external:<command>");
  app.add_option("--lengths", global.lengths, "token budgets, comma separated")
      ->delimiter(',');
  app.add_option("--strategy", global.strategy, "length assignment across documents")
      ->check(CLI::IsMember({"replicate", "partition"}));
  app.add_option("--workers", global.workers, "worker threads (0 = all cores)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "read aligned text files into corpus JSONL");
  std::string ingest_src, ingest_tgt, ingest_src_lang, ingest_tgt_lang, ingest_out;
  ingest->add_option("--src", ingest_src, "source text, one sentence per line")->required();
  ingest->add_option("--tgt", ingest_tgt, "target text, aligned line by line")->required();
  ingest->add_option("--src-lang", ingest_src_lang, "source ISO code")->required();
  ingest->add_option("--tgt-lang", ingest_tgt_lang, "target ISO code")->required();
  ingest->add_option("--out", ingest_out, "output path (default stdout)");
  ingest->callback([&] {
    corpus::Corpus corpus = corpus::parse_parallel_corpus(
        ingest_src, ingest_tgt, corpus::LangPair{ingest_src_lang, ingest_tgt_lang});
    std::ostringstream out;
    corpus::save_corpus(corpus, out);
    write_output(ingest_out, std::move(out).str());
    std::cerr << "ingested " << corpus.documents.size() << " documents\n";
  });

  // split
  auto* split_cmd = app.add_subcommand("split", "deterministic train/dev/test split");
  std::string split_corpus, split_out;
  double split_train_frac = 0.8;
  std::size_t split_dev_docs = 150, split_test_docs = 150;
  split_cmd->add_option("--corpus", split_corpus, "corpus JSONL")->required();
  split_cmd->add_option("--train-frac", split_train_frac, "fraction of documents for train");
  split_cmd->add_option("--dev-docs", split_dev_docs, "documents kept for dev");
  split_cmd->add_option("--test-docs", split_test_docs, "documents kept for test");
  split_cmd->add_option("--out", split_out, "output path (default stdout)");
  split_cmd->callback([&] {
    corpus::Corpus corpus = load_corpus_file(split_corpus);
    corpus::DatasetSplit split = corpus::split_dataset(
        corpus, global.seed, split_train_frac, split_dev_docs, split_test_docs);
    std::ostringstream out;
    corpus::save_split(split, out);
    write_output(split_out, std::move(out).str());
  });

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "#DOC/#SENT table per split");
  std::string stats_corpus, stats_split, stats_format = "text", stats_out;
  stats_cmd->add_option("--corpus", stats_corpus, "corpus JSONL")->required();
  stats_cmd->add_option("--split", stats_split, "split JSON")->required();
  stats_cmd->add_option("--format", stats_format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  stats_cmd->add_option("--out", stats_out, "output path (default stdout)");
  stats_cmd->callback([&] {
    corpus::Corpus corpus = load_corpus_file(stats_corpus);
    corpus::DatasetSplit split = load_split_file(stats_split);
    auto rows = corpus::corpus_stats(corpus, split);
    std::string rendered = stats_format == "csv"    ? corpus::render_stats_csv(rows)
                           : stats_format == "json" ? corpus::render_stats_json(rows)
                                                    : corpus::render_stats_text(rows);
    write_output(stats_out, rendered);
  });

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "greedy token-budget packing plans");
  std::string segment_corpus, segment_split, segment_subset = "all", segment_out;
  segment_cmd->add_option("--corpus", segment_corpus, "corpus JSONL")->required();
  segment_cmd->add_option("--split", segment_split, "split JSON (for --subset)");
  segment_cmd->add_option("--subset", segment_subset, "train | dev | test | all")
      ->check(CLI::IsMember({"train", "dev", "test", "all"}));
  segment_cmd->add_option("--out", segment_out, "output path (default stdout)");
  segment_cmd->callback([&] {
    corpus::Corpus corpus = load_corpus_file(segment_corpus);
    if (segment_subset != "all") {
      if (segment_split.empty())
        throw ValidationError("--subset needs --split");
      corpus::DatasetSplit split = load_split_file(segment_split);
      corpus = select_documents(corpus, subset_ids(split, segment_subset));
    }
    auto plans = seg::plan_corpus(corpus, global.lengths, global.tokenizer_spec(),
                                  global.worker_count());
    std::ostringstream out;
    seg::save_plans(plans, out);
    write_output(segment_out, std::move(out).str());
  });

  // build-instructions
  auto* build_cmd =
      app.add_subcommand("build-instructions", "assemble the mixed-instruction JSONL");
  std::string build_corpus, build_split, build_out;
  std::string build_sentence_budget = "all";
  bool build_no_sentence_level = false;
  std::string build_header, build_response_prefix = "text:";
  std::vector<std::string> build_lang_names;
  build_cmd->add_option("--corpus", build_corpus, "corpus JSONL")->required();
  build_cmd->add_option("--split", build_split, "split JSON")->required();
  build_cmd->add_option("--sentence-budget", build_sentence_budget,
                        "max sentence-level records, or \"all\"");
  build_cmd->add_flag("--no-sentence-level", build_no_sentence_level,
                      "emit document-level records only");
  build_cmd->add_option("--header", build_header,
                        "instruction wording with {src_lang}/{tgt_lang} placeholders");
  build_cmd->add_option("--response-prefix", build_response_prefix,
                        "text placed after \"### Response:\"");
  build_cmd->add_option("--lang-name", build_lang_names,
                        "extra display name, code=Name (repeatable)");
  build_cmd->add_option("--out", build_out, "output path (default stdout)");
  build_cmd->callback([&] {
    corpus::Corpus corpus = load_corpus_file(build_corpus);
    corpus::DatasetSplit split = load_split_file(build_split);
    std::optional<std::size_t> budget;
    if (build_sentence_budget != "all") {
      std::size_t parsed = 0;
      try {
        parsed = std::stoull(build_sentence_budget);
      } catch (const std::exception&) {
        throw ValidationError("--sentence-budget expects a count or \"all\"");
      }
      budget = parsed;
    }
    auto schedule = inst::build_length_schedule(
        split.train, global.lengths, inst::parse_strategy(global.strategy), global.seed);
    auto records = inst::assemble_mixed(
        corpus, split, schedule, !build_no_sentence_level, budget, global.seed,
        global.tokenizer_spec(),
        template_from_flags(build_header, build_response_prefix, build_lang_names),
        global.worker_count());
    std::ostringstream out;
    inst::save_records(records, out);
    write_output(build_out, std::move(out).str());
    std::cerr << "assembled " << records.size() << " instruction records\n";
  });

  // render-prompts
  auto* prompts_cmd = app.add_subcommand("render-prompts", "records to inference prompts");
  std::string prompts_records, prompts_response_prefix = "text:", prompts_out;
  prompts_cmd->add_option("--records", prompts_records, "instruction JSONL")->required();
  prompts_cmd->add_option("--response-prefix", prompts_response_prefix,
                          "text placed after \"### Response:\"");
  prompts_cmd->add_option("--out", prompts_out, "output path (default stdout)");
  prompts_cmd->callback([&] {
    std::ifstream in = open_input(prompts_records);
    auto records = inst::load_records(in);
    inst::PromptTemplate tmpl;
    tmpl.response_prefix = prompts_response_prefix;
    std::string out;
    for (const auto& record : records) {
      nlohmann::ordered_json obj;
      obj["prompt"] = inst::render_prompt(record, tmpl);
      out += obj.dump();
      out += '\n';
    }
    write_output(prompts_out, out);
  });

  // simulate
  auto* simulate_cmd =
      app.add_subcommand("simulate", "degrade references into model-like hypotheses");
  std::string sim_corpus, sim_plans, sim_split, sim_subset = "all", sim_out;
  sim::SimulatorConfig sim_cfg;
  simulate_cmd->add_option("--corpus", sim_corpus, "reference corpus JSONL")->required();
  simulate_cmd->add_option("--plans", sim_plans, "segmentation plans JSONL (optional)");
  simulate_cmd->add_option("--split", sim_split, "split JSON (for --subset)");
  simulate_cmd->add_option("--subset", sim_subset, "train | dev | test | all")
      ->check(CLI::IsMember({"train", "dev", "test", "all"}));
  simulate_cmd->add_option("--drop-prob", sim_cfg.tail_drop_prob,
                           "per-document probability of dropping sentences");
  simulate_cmd->add_option("--drop-one-prob", sim_cfg.drop_one_prob,
                           "given a drop, probability of losing one sentence (else two)");
  simulate_cmd->add_option("--noise", sim_cfg.noise, "token substitution rate");
  simulate_cmd->add_flag("--drop-anywhere", sim_cfg.drop_anywhere,
                         "drop random positions instead of the tail");
  simulate_cmd->add_option("--out", sim_out, "output path (default stdout)");
  simulate_cmd->callback([&] {
    corpus::Corpus corpus = load_corpus_file(sim_corpus);
    std::vector<seg::DocumentPlan> plans;
    if (!sim_plans.empty()) {
      std::ifstream in = open_input(sim_plans);
      plans = seg::load_plans(in);
    } else if (sim_subset != "all") {
      if (sim_split.empty()) throw ValidationError("--subset needs --split");
      corpus::DatasetSplit split = load_split_file(sim_split);
      corpus = select_documents(corpus, subset_ids(split, sim_subset));
    }
    sim_cfg.seed = global.seed;
    auto hyps = sim::simulate_outputs(corpus, plans, sim_cfg);
    std::ostringstream out;
    metrics::save_hyps(hyps, out);
    write_output(sim_out, std::move(out).str());
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "score document-level MT output");
  eval_cmd->require_subcommand(1);

  std::string eval_hyps, eval_refs, eval_format = "json", eval_out;
  std::size_t eval_max_n = 4;
  std::string eval_smoothing = "none";
  double eval_smoothing_k = 1.0;
  auto add_eval_io = [&](CLI::App* cmd, bool bleu_flags) {
    cmd->add_option("--hyps", eval_hyps, "hypothesis JSONL")->required();
    cmd->add_option("--refs", eval_refs, "reference corpus JSONL")->required();
    cmd->add_option("--format", eval_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", eval_out, "output path (default stdout)");
    if (bleu_flags) {
      cmd->add_option("--max-n", eval_max_n, "highest n-gram order");
      cmd->add_option("--smoothing", eval_smoothing, "none | add-k")
          ->check(CLI::IsMember({"none", "add-k"}));
      cmd->add_option("--smoothing-k", eval_smoothing_k, "add-k constant");
    }
  };

  auto load_grouped = [&] {
    LoadedEval data;
    data.refs = load_corpus_file(eval_refs);
    std::ifstream in = open_input(eval_hyps);
    data.hyps = metrics::load_hyps(in);
    data.grouped = group_hyps(data.refs, data.hyps);
    return data;
  };
  auto write_bleu = [&](const metrics::BleuScore& bleu) {
    write_output(eval_out, eval_format == "text" ? metrics::render_bleu_text(bleu)
                                                 : metrics::render_bleu_json(bleu));
  };

  auto* sbleu_cmd = eval_cmd->add_subcommand(
      "sbleu", "sentence-level BLEU via separator recovery");
  add_eval_io(sbleu_cmd, true);
  sbleu_cmd->callback([&] {
    auto data = load_grouped();
    std::vector<metrics::GeneratedDoc> outputs;
    std::vector<std::vector<std::string>> ref_sentences;
    for (const auto& group : data.grouped) {
      if (group.records.empty()) {
        outputs.push_back({group.doc->doc_id, "", group.doc->size()});
        ref_sentences.push_back(group.doc->target);
        continue;
      }
      for (const auto& r : group.records) {
        outputs.push_back({group.doc->doc_id, r.record->generated, r.end - r.start});
        ref_sentences.emplace_back(group.doc->target.begin() + static_cast<long>(r.start),
                                   group.doc->target.begin() + static_cast<long>(r.end));
      }
    }
    write_bleu(metrics::sbleu_from_documents(
        outputs, ref_sentences, global.tokenizer_spec(), eval_max_n,
        smoothing_from_flags(eval_smoothing, eval_smoothing_k)));
  });

  auto* dbleu_cmd = eval_cmd->add_subcommand("dbleu", "document-level BLEU");
  add_eval_io(dbleu_cmd, true);
  dbleu_cmd->callback([&] {
    auto data = load_grouped();
    std::vector<std::string> doc_hyps, doc_refs;
    for (const auto& group : data.grouped) {
      std::string hyp;
      for (const auto& r : group.records) {
        if (!hyp.empty()) hyp += ' ';
        hyp += r.record->generated;
      }
      doc_hyps.push_back(std::move(hyp));
      doc_refs.push_back(text::join(group.doc->target, " "));
    }
    write_bleu(metrics::dbleu(doc_hyps, doc_refs, global.tokenizer_spec(), eval_max_n,
                              smoothing_from_flags(eval_smoothing, eval_smoothing_k)));
  });

  auto* coverage_cmd =
      eval_cmd->add_subcommand("coverage", "separator-based sentence recovery stats");
  add_eval_io(coverage_cmd, false);
  coverage_cmd->callback([&] {
    auto data = load_grouped();
    std::vector<metrics::GeneratedDoc> outputs;
    for (const auto& group : data.grouped) {
      if (group.records.empty()) {
        outputs.push_back({group.doc->doc_id, "", group.doc->size()});
        continue;
      }
      for (const auto& r : group.records)
        outputs.push_back({group.doc->doc_id, r.record->generated, r.end - r.start});
    }
    auto report = metrics::coverage(outputs);
    write_output(eval_out, eval_format == "text"
                               ? metrics::render_coverage_text(report)
                               : metrics::render_coverage_json(report));
  });

  auto* tcp_cmd = eval_cmd->add_subcommand("tcp", "geometric mean of TC, CP and PT");
  double tcp_tc = 0.0, tcp_cp = 0.0, tcp_pt = 0.0;
  std::string tcp_format = "text", tcp_out;
  tcp_cmd->add_option("--tc", tcp_tc, "tense consistency percentage")->required();
  tcp_cmd->add_option("--cp", tcp_cp, "conjunction presence percentage")->required();
  tcp_cmd->add_option("--pt", tcp_pt, "pronoun translation percentage")->required();
  tcp_cmd->add_option("--format", tcp_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));
  tcp_cmd->add_option("--out", tcp_out, "output path (default stdout)");
  tcp_cmd->callback([&] {
    double value = metrics::tcp(tcp_tc, tcp_cp, tcp_pt);
    if (tcp_format == "json") {
      nlohmann::ordered_json obj;
      obj["tc"] = tcp_tc;
      obj["cp"] = tcp_cp;
      obj["pt"] = tcp_pt;
      obj["tcp"] = value;
      write_output(tcp_out, obj.dump(2) + "\n");
    } else {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.1f\n", value);
      write_output(tcp_out, buf);
    }
  });

  // score-external
  auto* score_cmd =
      app.add_subcommand("score-external", "send segment pairs to a scoring service");
  std::string score_pairs, score_hyps, score_refs, score_endpoint, score_out;
  score_cmd->add_option("--pairs", score_pairs, "pair JSONL {src, mt, ref}");
  score_cmd->add_option("--hyps", score_hyps, "hypothesis JSONL (with --refs)");
  score_cmd->add_option("--refs", score_refs, "reference corpus JSONL (with --hyps)");
  score_cmd->add_option("--endpoint", score_endpoint, "command line or http(s) URL")
      ->required();
  score_cmd->add_option("--out", score_out, "output path (default stdout)");
  score_cmd->callback([&] {
    std::vector<scorer::ScorerRequest> pairs;
    if (!score_pairs.empty()) {
      if (!score_hyps.empty() || !score_refs.empty())
        throw ValidationError("--pairs cannot be combined with --hyps/--refs");
      std::ifstream in = open_input(score_pairs);
      pairs = scorer::load_pairs(in);
    } else {
      if (score_hyps.empty() || score_refs.empty())
        throw ValidationError("score-external needs --pairs or both --hyps and --refs");
      corpus::Corpus refs = load_corpus_file(score_refs);
      std::ifstream in = open_input(score_hyps);
      auto hyps = metrics::load_hyps(in);
      auto grouped = group_hyps(refs, hyps);
      for (const auto& group : grouped) {
        for (const auto& r : group.records) {
          auto recovered =
              metrics::recover_sentences(r.record->generated, r.end - r.start);
          for (std::size_t k = 1; k <= r.end - r.start; ++k) {
            auto it = recovered.find(k);
            pairs.push_back({group.doc->source[r.start + k - 1],
                             it == recovered.end() ? "" : it->second,
                             group.doc->target[r.start + k - 1]});
          }
        }
      }
    }
    auto result = scorer::score_external(pairs, score_endpoint);
    write_output(score_out, scorer::render_scores_json(result));
  });

  // report
  auto* report_cmd =
      app.add_subcommand("report", "merge evaluation outputs into one table");
  std::string report_stats, report_sbleu, report_dbleu, report_coverage, report_scores,
      report_tcp, report_format = "text", report_out;
  report_cmd->add_option("--stats", report_stats, "stats JSON (from stats --format json)");
  report_cmd->add_option("--sbleu", report_sbleu, "BLEU JSON from eval sbleu");
  report_cmd->add_option("--dbleu", report_dbleu, "BLEU JSON from eval dbleu");
  report_cmd->add_option("--coverage", report_coverage, "coverage JSON");
  report_cmd->add_option("--scores", report_scores, "scorer JSON from score-external");
  report_cmd->add_option("--tcp", report_tcp, "discourse JSON from eval tcp --format json");
  report_cmd->add_option("--format", report_format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  report_cmd->add_option("--out", report_out, "output path (default stdout)");
  report_cmd->callback([&] {
    std::vector<report::ReportEntry> entries;
    auto append = [&](std::vector<report::ReportEntry> more) {
      entries.insert(entries.end(), more.begin(), more.end());
    };
    if (!report_stats.empty()) append(report::entries_from_stats_json(read_file(report_stats)));
    if (!report_sbleu.empty())
      append(report::entries_from_bleu_json("s-bleu", read_file(report_sbleu)));
    if (!report_dbleu.empty())
      append(report::entries_from_bleu_json("d-bleu", read_file(report_dbleu)));
    if (!report_coverage.empty())
      append(report::entries_from_coverage_json(read_file(report_coverage)));
    if (!report_scores.empty())
      append(report::entries_from_scores_json(read_file(report_scores)));
    if (!report_tcp.empty()) append(report::entries_from_tcp_json(read_file(report_tcp)));
    if (entries.empty())
      throw ValidationError("report needs at least one input file");
    std::string rendered = report_format == "csv"    ? report::render_report_csv(entries)
                           : report_format == "json" ? report::render_report_json(entries)
                                                     : report::render_report_text(entries);
    write_output(report_out, rendered);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const docmt::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const docmt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
