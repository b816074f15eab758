#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "docmt/error.hpp"

namespace docmt::report {

// One metric value in a merged evaluation report. Values are doubles
// serialized with the shortest round-trip representation, so CSV and JSON
// renderings parse back to bit-identical numbers.
struct ReportEntry {
  std::string section;
  std::string metric;
  double value = 0.0;

  bool operator==(const ReportEntry&) const = default;
};

// Converters from the JSON documents the other subcommands emit.
std::vector<ReportEntry> entries_from_stats_json(const std::string& json_text);
std::vector<ReportEntry> entries_from_bleu_json(const std::string& section,
                                                const std::string& json_text);
std::vector<ReportEntry> entries_from_coverage_json(const std::string& json_text);
std::vector<ReportEntry> entries_from_scores_json(const std::string& json_text);
std::vector<ReportEntry> entries_from_tcp_json(const std::string& json_text);

// RFC 4180: header "section,metric,value", CRLF line endings, quotes only
// where needed.
std::string render_report_csv(const std::vector<ReportEntry>& entries);
std::vector<ReportEntry> parse_report_csv(std::string_view csv);

std::string render_report_json(const std::vector<ReportEntry>& entries);
std::vector<ReportEntry> parse_report_json(const std::string& json_text);

// Aligned plain-text table; corpus-stats sections are grouped into a
// #DOC / #SENT matrix, everything else prints one metric per line.
std::string render_report_text(const std::vector<ReportEntry>& entries);

// Shortest decimal form that parses back to exactly `value`.
std::string format_value(double value);

}  // namespace docmt::report
