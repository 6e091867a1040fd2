#include "cwe_analyzer/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <regex>
#include <sstream>
#include <thread>

#include "cwe_analyzer/aggregator.hpp"
#include "cwe_analyzer/atomic_file.hpp"
#include "cwe_analyzer/errors.hpp"
#include "cwe_analyzer/feed_parser.hpp"
#include "cwe_analyzer/fetcher.hpp"
#include "cwe_analyzer/guideline.hpp"
#include "cwe_analyzer/report.hpp"
#include "cwe_analyzer/version.hpp"

namespace cwe_analyzer {

namespace fs = std::filesystem;

namespace {

/// Raised for argument problems detected after CLI11 parsing; maps to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string years;
  std::vector<std::string> inputs;
  std::string cache_dir;
  std::string base_url{kDefaultBaseUrl};
  std::string out_dir = "report";
  std::size_t top = 10;
  bool include_special = false;
  std::string builtin;
  std::string catalog_path;
  unsigned jobs = 1;
  bool force = false;
};

YearRange parse_years(const std::string& text) {
  static const std::regex re(R"(^([0-9]{4})(?:-([0-9]{4}))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("--years expects YYYY or YYYY-YYYY, got '" + text + "'");
  const int first = std::stoi(m[1].str());
  const int last = m[2].matched ? std::stoi(m[2].str()) : first;
  if (last < first) throw UsageError("--years range is inverted: " + text);
  return {first, last};
}

fs::path require_cache_dir(const Options& opt) {
  if (opt.cache_dir.empty()) throw UsageError("no cache directory: pass --cache-dir or set CWE_ANALYZER_CACHE");
  return opt.cache_dir;
}

struct ParsedInput {
  fs::path path;
  CweCountTable table;
  FeedSummary summary;
  std::uint64_t file_size = 0;
};

std::vector<fs::path> resolve_inputs(const Options& opt) {
  std::vector<fs::path> paths(opt.inputs.begin(), opt.inputs.end());
  if (!opt.years.empty()) {
    const auto years = parse_years(opt.years);
    const auto cache = require_cache_dir(opt);
    for (int y = years.first; y <= years.last; ++y) paths.push_back(cached_feed_path(cache, y));
  }
  if (paths.empty()) throw UsageError("no inputs: pass --input <file> or --years with a cache directory");
  return paths;
}

// Parses every input, up to `jobs` files at a time. Results keep input order.
std::vector<ParsedInput> parse_inputs(const std::vector<fs::path>& paths, unsigned jobs) {
  std::vector<ParsedInput> parsed(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next.fetch_add(1); i < paths.size(); i = next.fetch_add(1)) {
      try {
        auto& p = parsed[i];
        p.path = paths[i];
        const int year = resolve_feed_year(p.path, std::nullopt);
        p.table = CweCountTable(year);
        p.summary = stream_feed_file(p.path, [&](CveRecord&& r) { p.table.add(r); });
        p.file_size = fs::file_size(p.path);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto n = std::clamp<std::size_t>(jobs, 1, paths.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return parsed;
}

void print_diagnostics(const std::vector<ParsedInput>& parsed, std::ostream& err) {
  for (const auto& p : parsed) {
    for (const auto& d : p.summary.diagnostics) err << d.format() << '\n';
  }
}

CweCountTable merged_table(const std::vector<ParsedInput>& parsed) {
  CweCountTable total;
  for (const auto& p : parsed) total = merge(total, p.table);
  return total;
}

std::vector<ManifestFeed> manifest_feeds(const std::vector<ParsedInput>& parsed) {
  std::vector<ManifestFeed> feeds;
  for (const auto& p : parsed) {
    feeds.push_back(ManifestFeed{p.summary.stats.feed_year, p.path.string(), std::nullopt, p.summary.content_sha256,
                                 p.file_size});
  }
  return feeds;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

int cmd_fetch(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.years.empty()) throw UsageError("fetch needs --years");
  const auto years = parse_years(opt.years);

  FetchOptions fetch;
  fetch.base_url = opt.base_url;
  fetch.cache_dir = require_cache_dir(opt);
  fetch.force = opt.force;
  fetch.jobs = std::max(1u, opt.jobs);

  std::vector<YearOutcome> outcomes;
  int status = kExitOk;
  try {
    for (auto& d : fetch_range(years, fetch)) outcomes.push_back(YearOutcome{d.year, std::move(d), {}});
  } catch (const PartialFailure& e) {
    outcomes = e.outcomes();
    status = kExitFailure;
  }

  for (const auto& o : outcomes) {
    if (!o.descriptor) {
      out << o.year << " FAILED " << o.error << '\n';
      continue;
    }
    const auto& d = *o.descriptor;
    out << d.year << ' ' << (d.from_cache ? "cached" : "fetched") << ' ' << d.cache_path.string();
    if (d.sha256) out << " sha256=" << *d.sha256;
    out << '\n';
    for (const auto& w : d.warnings) err << "WARN " << d.year << " fetch " << w << '\n';
  }
  return status;
}

int cmd_rank(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.top == 0) throw UsageError("--top must be at least 1");
  const auto paths = resolve_inputs(opt);
  const auto parsed = parse_inputs(paths, opt.jobs);
  print_diagnostics(parsed, err);

  const auto total = merged_table(parsed);
  const auto ranked = rank(total, opt.top, opt.include_special);
  std::vector<CweCountTable> per_year;
  for (const auto& p : parsed) per_year.push_back(p.table);

  RunManifest manifest;
  manifest.command = "rank";
  manifest.feeds = manifest_feeds(parsed);
  manifest.config = {{"top", std::to_string(opt.top)}, {"include_special", opt.include_special ? "true" : "false"}};

  const fs::path dir = opt.out_dir;
  OutputBatch batch;
  batch.stage(dir / "counts.csv", render([&](std::ostream& s) { emit_counts_csv(total, s); }));
  batch.stage(dir / "counts_by_year.csv", render([&](std::ostream& s) { emit_yearly_csv(per_year, s); }));
  batch.stage(dir / "ranking.csv", render([&](std::ostream& s) { emit_chart_data(ranked, s, ChartFormat::Csv); }));
  batch.stage(dir / "ranking.json",
              render([&](std::ostream& s) { emit_chart_data(ranked, s, ChartFormat::Structured); }));
  batch.stage(dir / "manifest.json", render([&](std::ostream& s) { emit_run_manifest(manifest, s); }));
  batch.commit();

  out << std::left << std::setw(6) << "rank" << std::setw(18) << "cwe" << "count\n";
  for (const auto& e : ranked) {
    out << std::left << std::setw(6) << e.rank << std::setw(18) << e.cwe.raw() << e.count << '\n';
  }
  return kExitOk;
}

int cmd_coverage(const Options& opt, std::ostream& out, std::ostream& err) {
  if (!opt.builtin.empty() && !opt.catalog_path.empty()) throw UsageError("use either --builtin or --catalog");

  std::optional<GuidelineCatalog> loaded;
  std::string catalog_source;
  if (!opt.catalog_path.empty()) {
    std::ifstream in(opt.catalog_path, std::ios::binary);
    if (!in) throw FileUnreadable("cannot open catalog " + opt.catalog_path);
    loaded = load_catalog(in);
    catalog_source = opt.catalog_path;
    for (const auto& w : loaded->warnings()) err << "WARN catalog " << loaded->name() << ' ' << w << '\n';
  } else {
    const std::string name = opt.builtin.empty() ? "owasp2017" : opt.builtin;
    try {
      loaded = builtin_catalog(name);
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
    catalog_source = "builtin:" + name;
  }
  const GuidelineCatalog& catalog = *loaded;

  const auto paths = resolve_inputs(opt);
  const auto parsed = parse_inputs(paths, opt.jobs);
  print_diagnostics(parsed, err);

  const auto total = merged_table(parsed);
  const auto report = coverage(total, catalog);
  std::optional<Rank1Comparison> rank1;
  try {
    rank1 = compare_rank1(total, catalog);
  } catch (const EmptyTable&) {
  } catch (const std::invalid_argument&) {
  }

  RunManifest manifest;
  manifest.command = "coverage";
  manifest.catalog_name = catalog.name();
  manifest.feeds = manifest_feeds(parsed);
  manifest.config = {{"catalog_source", catalog_source}};

  const fs::path dir = opt.out_dir;
  OutputBatch batch;
  batch.stage(dir / "counts.csv", render([&](std::ostream& s) { emit_counts_csv(total, s); }));
  batch.stage(dir / "coverage.json", render([&](std::ostream& s) { emit_coverage_report(report, rank1, s); }));
  batch.stage(dir / "coverage_chart.csv",
              render([&](std::ostream& s) { emit_chart_data(report, s, ChartFormat::Csv); }));
  batch.stage(dir / "coverage_chart.json",
              render([&](std::ostream& s) { emit_chart_data(report, s, ChartFormat::Structured); }));
  batch.stage(dir / "manifest.json", render([&](std::ostream& s) { emit_run_manifest(manifest, s); }));
  batch.commit();

  out << "catalog: " << catalog.name() << '\n';
  out << "covered=" << report.covered_assignments << " uncovered=" << report.uncovered_assignments
      << " special=" << report.special_assignments << '\n';
  out << "coverage_fraction=" << report.coverage_fraction.str() << " (" << std::fixed << std::setprecision(6)
      << report.coverage_fraction.value() << ")\n";
  out << "fraction_of_total=" << report.fraction_of_total.str() << " (" << report.fraction_of_total.value() << ")\n";
  out << std::defaultfloat;
  if (rank1) {
    out << "rank1=" << rank1->table_rank1.raw() << " count=" << rank1->table_rank1_count
        << " first_category=" << rank1->catalog_first_category << " agrees=" << (rank1->agrees ? "true" : "false")
        << '\n';
  } else {
    out << "rank1=none agrees=false\n";
  }
  out << "guideline_cwes_absent_from_data=" << report.guideline_cwes_absent_from_data.size() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  if (const char* env = std::getenv("CWE_ANALYZER_CACHE")) opt.cache_dir = env;

  CLI::App app{"Counts CWE weaknesses in NVD JSON 1.1 feeds and measures guideline coverage",
               std::string(kToolName)};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--input", opt.inputs, "Feed file (nvdcve-1.1-<YYYY>.json[.gz]); repeatable");
    sub->add_option("--years", opt.years, "Cached feed years, YYYY or YYYY-YYYY");
    sub->add_option("--cache-dir", opt.cache_dir, "Feed cache (default: $CWE_ANALYZER_CACHE)");
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "Files parsed in parallel")->capture_default_str();
  };

  auto* fetch = app.add_subcommand("fetch", "Download per-year feed archives into the cache");
  fetch->add_option("--years", opt.years, "YYYY or YYYY-YYYY")->required();
  fetch->add_option("--base-url", opt.base_url, "Feed base URL (http, https or file)")->capture_default_str();
  fetch->add_option("--cache-dir", opt.cache_dir, "Feed cache (default: $CWE_ANALYZER_CACHE)");
  fetch->add_option("--jobs", opt.jobs, "Concurrent downloads")->capture_default_str();
  fetch->add_flag("--force", opt.force, "Download even when cached");

  auto* rank_cmd = app.add_subcommand("rank", "Rank weaknesses by frequency");
  add_inputs(rank_cmd);
  rank_cmd->add_option("--top", opt.top, "Number of ranked entries")->capture_default_str();
  rank_cmd->add_flag("--include-special", opt.include_special, "Rank NVD markers and unrecognized tokens too");

  auto* coverage_cmd = app.add_subcommand("coverage", "Measure how much of the weakness population a catalog covers");
  add_inputs(coverage_cmd);
  coverage_cmd->add_option("--builtin", opt.builtin, "Built-in catalog (owasp2017)");
  coverage_cmd->add_option("--catalog", opt.catalog_path, "Catalog JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fetch) return cmd_fetch(opt, out, err);
    if (*rank_cmd) return cmd_rank(opt, out, err);
    return cmd_coverage(opt, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace cwe_analyzer
