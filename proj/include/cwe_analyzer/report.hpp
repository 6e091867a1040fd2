#pragma once

// Serializers for tables, rankings, coverage reports and run manifests.
//
// CSV output is UTF-8 with LF line endings, no BOM and no quoting. Weakness
// tokens never need quoting; unrecognized tokens are percent-escaped (see
// csv_field) so that no field ever contains a comma, quote or line break.
// Structured output is one JSON object per document.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cwe_analyzer/cwe_model.hpp"
#include "cwe_analyzer/guideline.hpp"

namespace cwe_analyzer {

struct FeedDescriptor;

enum class ChartFormat { Csv, Structured };

/// `%`, `,`, `"`, CR, LF and other control bytes become `%XX`.
std::string csv_field(std::string_view raw);

/// Rows in report order: weaknesses by count descending then number
/// ascending, followed by every other token in raw byte order.
std::vector<std::pair<CweId, std::uint64_t>> report_rows(const CountMap& counts);

/// `cwe,count` then one row per token in report_rows() order.
void emit_counts_csv(const CweCountTable& table, std::ostream& out);

/// `cwe,<year>...,total`: one column per distinct year among `per_year`
/// (tables of the same year are summed), rows ordered by total. Each table
/// must cover a single year; throws std::invalid_argument otherwise.
void emit_yearly_csv(std::span<const CweCountTable> per_year, std::ostream& out);

/// Bar-chart series of a ranking: CSV `label,count`, or
/// `{"kind":"ranking","series":[{"rank","label","count"}...]}`.
void emit_chart_data(std::span<const RankedEntry> ranked, std::ostream& out, ChartFormat format);

/// Covered-weakness series plus the covered/uncovered/special triple. CSV is
/// `series,label,count` with `per_cwe_covered` rows then three `summary` rows.
void emit_chart_data(const CoverageReport& report, std::ostream& out, ChartFormat format);

/// Full coverage report (and the rank-1 comparison when there is one) as JSON.
void emit_coverage_report(const CoverageReport& report, const std::optional<Rank1Comparison>& rank1,
                          std::ostream& out);

struct ManifestFeed {
  int year = 0;
  std::string source;
  std::optional<std::string> url;
  std::optional<std::string> sha256;
  std::optional<std::uint64_t> size;

  friend bool operator==(const ManifestFeed&, const ManifestFeed&) = default;
};

ManifestFeed manifest_feed(const FeedDescriptor& descriptor);

struct RunManifest {
  std::string command;
  std::optional<std::string> catalog_name;
  std::vector<ManifestFeed> feeds;
  std::map<std::string, std::string> config;
  /// The only field allowed to differ between identical runs.
  std::chrono::system_clock::time_point generated_at = std::chrono::system_clock::now();
};

/// Writes the manifest as JSON; feeds are listed by year then source.
void emit_run_manifest(const RunManifest& manifest, std::ostream& out);

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_utc(std::chrono::system_clock::time_point t);

}  // namespace cwe_analyzer
