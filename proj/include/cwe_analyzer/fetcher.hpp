#pragma once

// Downloads NVD per-year feed archives into a local cache.
//
// Cache layout: <cache_dir>/nvdcve-1.1-<YYYY>.json.gz plus, when upstream
// publishes one, <cache_dir>/nvdcve-1.1-<YYYY>.meta. The digest recorded for
// a feed is the SHA-256 of its decompressed JSON, which is what NVD `.meta`
// files carry.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cwe_analyzer/cwe_model.hpp"
#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

inline constexpr std::string_view kDefaultBaseUrl = "https://nvd.nist.gov/feeds/json/cve/1.1";

struct FeedDescriptor {
  int year = 0;
  std::string url;
  std::filesystem::path cache_path;
  std::optional<std::string> sha256;
  std::optional<std::uint64_t> size;
  /// Set when this call downloaded the archive.
  std::optional<std::chrono::system_clock::time_point> fetched_at;
  bool from_cache = false;
  std::vector<std::string> warnings;
};

struct FetchOptions {
  std::string base_url{kDefaultBaseUrl};
  std::filesystem::path cache_dir;
  bool force = false;
  /// `{base}` and `{year}` are substituted.
  std::string feed_url_template = "{base}/nvdcve-1.1-{year}.json.gz";
  std::string meta_url_template = "{base}/nvdcve-1.1-{year}.meta";
  YearRange supported_years{2002, 2100};
  unsigned jobs = 4;
  std::chrono::seconds timeout{120};
};

/// Fields of an NVD `.meta` file (`key:value` lines).
struct FeedMeta {
  std::optional<std::string> last_modified;
  std::optional<std::uint64_t> size;
  std::optional<std::uint64_t> gz_size;
  std::optional<std::string> sha256;
};

FeedMeta parse_meta(std::string_view text);

std::string expand_url_template(std::string_view tmpl, std::string_view base, int year);
std::filesystem::path cached_feed_path(const std::filesystem::path& cache_dir, int year);
std::filesystem::path cached_meta_path(const std::filesystem::path& cache_dir, int year);

/// Returns the cached archive for `year`, downloading it when absent, when
/// `force` is set, or when a cached `.meta` digest no longer matches. A cache
/// hit performs no network activity.
///
/// Throws std::out_of_range for a year outside `supported_years`,
/// NetworkUnavailable, HttpFailure, DigestMismatch, or SinkFailure.
FeedDescriptor fetch_feed(int year, const FetchOptions& options);

struct YearOutcome {
  int year = 0;
  std::optional<FeedDescriptor> descriptor;
  std::string error;
};

/// Raised by fetch_range when at least one year failed.
class PartialFailure : public Error {
 public:
  explicit PartialFailure(std::vector<YearOutcome> outcomes);

  const std::vector<YearOutcome>& outcomes() const noexcept { return outcomes_; }
  std::size_t successes() const noexcept;

 private:
  std::vector<YearOutcome> outcomes_;
};

/// fetch_feed for every year of the range, up to `options.jobs` at a time.
/// Results are in year order.
std::vector<FeedDescriptor> fetch_range(YearRange years, const FetchOptions& options);

}  // namespace cwe_analyzer
