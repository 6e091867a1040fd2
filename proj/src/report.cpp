#include "cwe_analyzer/report.hpp"

#include <algorithm>
#include <ctime>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "cwe_analyzer/aggregator.hpp"
#include "cwe_analyzer/errors.hpp"
#include "cwe_analyzer/fetcher.hpp"
#include "cwe_analyzer/version.hpp"

namespace cwe_analyzer {

namespace {

using ojson = nlohmann::ordered_json;

void check_sink(const std::ostream& out, std::string_view what) {
  if (!out) throw SinkFailure("failed writing " + std::string(what));
}

ojson to_json(const std::vector<CweId>& cwes) {
  ojson out = ojson::array();
  for (const auto& cwe : cwes) out.push_back(cwe.raw());
  return out;
}

}  // namespace

std::string csv_field(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == '%' || c == ',' || c == '"' || c < 0x20 || c == 0x7f) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    } else {
      out.push_back(ch);
    }
  }
  return out;
}

std::vector<std::pair<CweId, std::uint64_t>> report_rows(const CountMap& counts) {
  std::vector<std::pair<CweId, std::uint64_t>> rows;
  rows.reserve(counts.size());
  for (const auto& [raw, n] : counts) rows.emplace_back(CweId::parse(raw), n);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first.is_weakness() != b.first.is_weakness()) return a.first.is_weakness();
    if (a.first.is_weakness()) return rank_order_less(a.first, a.second, b.first, b.second);
    return a.first.raw() < b.first.raw();
  });
  return rows;
}

void emit_counts_csv(const CweCountTable& table, std::ostream& out) {
  out << "cwe,count\n";
  for (const auto& [cwe, n] : report_rows(table.counts())) out << csv_field(cwe.raw()) << ',' << n << '\n';
  check_sink(out, "counts CSV");
}

void emit_yearly_csv(std::span<const CweCountTable> per_year, std::ostream& out) {
  std::map<int, CweCountTable> by_year;
  for (const auto& table : per_year) {
    const auto& years = table.year_range();
    if (!years || years->first != years->last) {
      throw std::invalid_argument("emit_yearly_csv needs single-year tables");
    }
    auto& slot = by_year[years->first];
    slot = merge(slot, table);
  }

  CweCountTable total;
  for (const auto& [year, table] : by_year) total = merge(total, table);

  out << "cwe";
  for (const auto& [year, table] : by_year) out << ',' << year;
  out << ",total\n";
  for (const auto& [cwe, n] : report_rows(total.counts())) {
    out << csv_field(cwe.raw());
    for (const auto& [year, table] : by_year) out << ',' << table.count(cwe.raw());
    out << ',' << n << '\n';
  }
  check_sink(out, "per-year CSV");
}

void emit_chart_data(std::span<const RankedEntry> ranked, std::ostream& out, ChartFormat format) {
  if (format == ChartFormat::Csv) {
    out << "label,count\n";
    for (const auto& e : ranked) out << csv_field(e.cwe.raw()) << ',' << e.count << '\n';
  } else {
    ojson series = ojson::array();
    for (const auto& e : ranked) series.push_back({{"rank", e.rank}, {"label", e.cwe.raw()}, {"count", e.count}});
    out << ojson{{"kind", "ranking"}, {"series", std::move(series)}}.dump(2) << '\n';
  }
  check_sink(out, "ranking chart data");
}

void emit_chart_data(const CoverageReport& report, std::ostream& out, ChartFormat format) {
  const auto rows = report_rows(report.per_cwe_covered);
  if (format == ChartFormat::Csv) {
    out << "series,label,count\n";
    for (const auto& [cwe, n] : rows) out << "per_cwe_covered," << csv_field(cwe.raw()) << ',' << n << '\n';
    out << "summary,covered," << report.covered_assignments << '\n';
    out << "summary,uncovered," << report.uncovered_assignments << '\n';
    out << "summary,special," << report.special_assignments << '\n';
  } else {
    ojson series = ojson::array();
    for (const auto& [cwe, n] : rows) series.push_back({{"label", cwe.raw()}, {"count", n}});
    ojson doc = {{"kind", "coverage"},
                 {"catalog", report.catalog_name},
                 {"series", std::move(series)},
                 {"summary",
                  {{"covered", report.covered_assignments},
                   {"uncovered", report.uncovered_assignments},
                   {"special", report.special_assignments}}}};
    out << doc.dump(2) << '\n';
  }
  check_sink(out, "coverage chart data");
}

void emit_coverage_report(const CoverageReport& report, const std::optional<Rank1Comparison>& rank1,
                          std::ostream& out) {
  ojson per_category = ojson::array();
  for (const auto& [id, n] : report.per_category) per_category.push_back({{"id", id}, {"count", n}});
  ojson per_cwe = ojson::array();
  for (const auto& [cwe, n] : report_rows(report.per_cwe_covered)) {
    per_cwe.push_back({{"cwe", cwe.raw()}, {"count", n}});
  }
  auto fraction = [](const Rational& r) {
    return ojson{{"numerator", r.numerator}, {"denominator", r.denominator}, {"value", r.value()}};
  };

  ojson doc = {{"catalog", report.catalog_name},
               {"total_assignments", report.total_assignments},
               {"covered_assignments", report.covered_assignments},
               {"uncovered_assignments", report.uncovered_assignments},
               {"special_assignments", report.special_assignments},
               {"coverage_fraction", fraction(report.coverage_fraction)},
               {"fraction_of_total", fraction(report.fraction_of_total)},
               {"per_category", std::move(per_category)},
               {"per_cwe_covered", std::move(per_cwe)},
               {"guideline_cwes_absent_from_data", to_json(report.guideline_cwes_absent_from_data)}};
  if (rank1) {
    doc["rank1"] = {{"table_rank1", rank1->table_rank1.raw()},
                    {"table_rank1_count", rank1->table_rank1_count},
                    {"catalog_first_category", rank1->catalog_first_category},
                    {"catalog_first_set", to_json(rank1->catalog_first_set)},
                    {"agrees", rank1->agrees}};
  }
  out << doc.dump(2) << '\n';
  check_sink(out, "coverage report");
}

ManifestFeed manifest_feed(const FeedDescriptor& descriptor) {
  return ManifestFeed{descriptor.year, descriptor.cache_path.string(), descriptor.url, descriptor.sha256,
                      descriptor.size};
}

std::string format_utc(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit_run_manifest(const RunManifest& manifest, std::ostream& out) {
  auto feeds_sorted = manifest.feeds;
  std::sort(feeds_sorted.begin(), feeds_sorted.end(),
            [](const ManifestFeed& a, const ManifestFeed& b) { return std::tie(a.year, a.source) < std::tie(b.year, b.source); });

  ojson feeds = ojson::array();
  for (const auto& f : feeds_sorted) {
    ojson entry = {{"year", f.year}, {"source", f.source}};
    entry["url"] = f.url ? ojson(*f.url) : ojson(nullptr);
    entry["sha256"] = f.sha256 ? ojson(*f.sha256) : ojson(nullptr);
    entry["size"] = f.size ? ojson(*f.size) : ojson(nullptr);
    feeds.push_back(std::move(entry));
  }
  ojson config = ojson::object();
  for (const auto& [k, v] : manifest.config) config[k] = v;

  ojson doc = {{"tool", std::string(kToolName)},
               {"version", std::string(kVersion)},
               {"command", manifest.command},
               {"generated_at", format_utc(manifest.generated_at)},
               {"catalog", manifest.catalog_name ? ojson(*manifest.catalog_name) : ojson(nullptr)},
               {"config", std::move(config)},
               {"feeds", std::move(feeds)}};
  out << doc.dump(2) << '\n';
  check_sink(out, "run manifest");
}

}  // namespace cwe_analyzer
