#include "docmt/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>

#include "json.hpp"

namespace docmt::report {

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(what) + ": " + e.what());
  }
}

double number_at(const nlohmann::json& obj, const char* key, const char* what) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw ValidationError(std::string(what) + ": missing numeric field \"" + key + "\"");
  return obj[key].get<double>();
}

bool needs_quotes(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_csv_field(std::string& out, std::string_view field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

// Splits one CSV record; `at` points past the record's terminator on return.
std::vector<std::string> read_csv_record(std::string_view csv, std::size_t& at) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (at < csv.size()) {
    char c = csv[at];
    if (quoted) {
      if (c == '"') {
        if (at + 1 < csv.size() && csv[at + 1] == '"') {
          field += '"';
          at += 2;
          continue;
        }
        quoted = false;
        ++at;
        continue;
      }
      field += c;
      ++at;
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      ++at;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      ++at;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && at + 1 < csv.size() && csv[at + 1] == '\n')
        at += 2;
      else
        ++at;
      break;
    }
    field += c;
    ++at;
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

std::string format_value(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw ValidationError("value is not representable");
  return std::string(buf, end);
}

std::vector<ReportEntry> entries_from_stats_json(const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "stats report");
  if (!doc.is_array()) throw ValidationError("stats report: expected a JSON array");
  std::vector<ReportEntry> entries;
  for (const auto& row : doc) {
    if (!row.is_object() || !row.contains("split") || !row["split"].is_string())
      throw ValidationError("stats report: rows need a \"split\" string");
    const std::string split = row["split"].get<std::string>();
    entries.push_back({split, "docs", number_at(row, "docs", "stats report")});
    entries.push_back({split, "sentences", number_at(row, "sentences", "stats report")});
  }
  return entries;
}

std::vector<ReportEntry> entries_from_bleu_json(const std::string& section,
                                                const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "BLEU report");
  std::vector<ReportEntry> entries;
  entries.push_back({section, "score", number_at(doc, "score", "BLEU report")});
  if (doc.contains("precisions") && doc["precisions"].is_array()) {
    std::size_t n = 0;
    for (const auto& p : doc["precisions"]) {
      ++n;
      if (!p.is_number()) throw ValidationError("BLEU report: non-numeric precision");
      entries.push_back({section, "p" + std::to_string(n), p.get<double>()});
    }
  }
  entries.push_back(
      {section, "brevity_penalty", number_at(doc, "brevity_penalty", "BLEU report")});
  entries.push_back({section, "hyp_len", number_at(doc, "hyp_len", "BLEU report")});
  entries.push_back({section, "ref_len", number_at(doc, "ref_len", "BLEU report")});
  return entries;
}

std::vector<ReportEntry> entries_from_coverage_json(const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "coverage report");
  std::vector<ReportEntry> entries;
  entries.push_back(
      {"coverage", "accuracy", number_at(doc, "corpus_accuracy", "coverage report")});
  if (doc.contains("docs") && doc["docs"].is_array()) {
    double full = 0.0;
    for (const auto& d : doc["docs"])
      if (d.is_object() && d.value("full", false)) full += 1.0;
    entries.push_back({"coverage", "docs", static_cast<double>(doc["docs"].size())});
    entries.push_back({"coverage", "full_docs", full});
  }
  return entries;
}

std::vector<ReportEntry> entries_from_scores_json(const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "scorer report");
  std::vector<ReportEntry> entries;
  entries.push_back({"scorer", "system", number_at(doc, "system", "scorer report")});
  if (doc.contains("scores") && doc["scores"].is_array())
    entries.push_back({"scorer", "segments", static_cast<double>(doc["scores"].size())});
  return entries;
}

std::vector<ReportEntry> entries_from_tcp_json(const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "discourse report");
  std::vector<ReportEntry> entries;
  for (const char* key : {"tc", "cp", "pt", "tcp"})
    entries.push_back({"discourse", key, number_at(doc, key, "discourse report")});
  return entries;
}

std::string render_report_csv(const std::vector<ReportEntry>& entries) {
  std::string out = "section,metric,value\r\n";
  for (const auto& entry : entries) {
    append_csv_field(out, entry.section);
    out += ',';
    append_csv_field(out, entry.metric);
    out += ',';
    out += format_value(entry.value);
    out += "\r\n";
  }
  return out;
}

std::vector<ReportEntry> parse_report_csv(std::string_view csv) {
  std::size_t at = 0;
  std::vector<std::string> header = read_csv_record(csv, at);
  if (header != std::vector<std::string>{"section", "metric", "value"})
    throw ValidationError("report CSV: unexpected header");
  std::vector<ReportEntry> entries;
  while (at < csv.size()) {
    std::vector<std::string> fields = read_csv_record(csv, at);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3)
      throw ValidationError("report CSV: expected 3 fields per record");
    ReportEntry entry;
    entry.section = std::move(fields[0]);
    entry.metric = std::move(fields[1]);
    const std::string& value = fields[2];
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), entry.value);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ValidationError("report CSV: bad number \"" + value + "\"");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string render_report_json(const std::vector<ReportEntry>& entries) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& entry : entries) {
    nlohmann::ordered_json obj;
    obj["section"] = entry.section;
    obj["metric"] = entry.metric;
    obj["value"] = entry.value;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<ReportEntry> parse_report_json(const std::string& json_text) {
  nlohmann::json doc = parse_json(json_text, "report JSON");
  if (!doc.is_array()) throw ValidationError("report JSON: expected an array");
  std::vector<ReportEntry> entries;
  for (const auto& row : doc) {
    ReportEntry entry;
    entry.section = row.at("section").get<std::string>();
    entry.metric = row.at("metric").get<std::string>();
    entry.value = number_at(row, "value", "report JSON");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string render_report_text(const std::vector<ReportEntry>& entries) {
  // Sections carrying both a docs and a sentences metric print as the
  // familiar per-split matrix; everything else as key-value lines grouped by
  // section.
  std::set<std::string> has_docs, has_sentences;
  for (const auto& entry : entries) {
    if (entry.metric == "docs") has_docs.insert(entry.section);
    if (entry.metric == "sentences") has_sentences.insert(entry.section);
  }
  auto in_matrix = [&](const ReportEntry& entry) {
    return (entry.metric == "docs" || entry.metric == "sentences") &&
           has_docs.count(entry.section) && has_sentences.count(entry.section);
  };

  std::vector<std::string> split_order;
  std::map<std::string, std::map<std::string, double>> splits;
  std::vector<const ReportEntry*> rest;
  for (const auto& entry : entries) {
    if (in_matrix(entry)) {
      if (!splits.count(entry.section)) split_order.push_back(entry.section);
      splits[entry.section][entry.metric] = entry.value;
    } else {
      rest.push_back(&entry);
    }
  }

  std::string out;
  if (!splits.empty()) {
    out += "split           #DOC      #SENT\n";
    for (const auto& split : split_order) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%-12s %7.0f %10.0f\n", split.c_str(),
                    splits[split]["docs"], splits[split]["sentences"]);
      out += buf;
    }
  }

  std::string current;
  for (const ReportEntry* entry : rest) {
    if (entry->section != current) {
      if (!out.empty()) out += '\n';
      out += entry->section + "\n";
      current = entry->section;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "  %-16s %s\n", entry->metric.c_str(),
                  format_value(entry->value).c_str());
    out += buf;
  }
  return out;
}

}  // namespace docmt::report
