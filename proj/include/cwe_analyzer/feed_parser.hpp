#pragma once

// Streaming reader for NVD JSON 1.1 per-year feeds.
//
// Only the identity (`cve.CVE_data_meta.ID`) and weakness
// (`cve.problemtype`) subtrees of each `CVE_Items` element are materialized;
// everything else is skipped as it streams past. At most one item is held in
// memory at a time.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwe_analyzer/cwe_model.hpp"

namespace cwe_analyzer {

struct FeedStats {
  int feed_year = 0;
  std::uint64_t records_parsed = 0;
  std::uint64_t records_with_no_cwe = 0;
  std::uint64_t assignments_extracted = 0;
  std::uint64_t unrecognized_tokens = 0;
  std::uint64_t bytes_consumed = 0;

  friend bool operator==(const FeedStats&, const FeedStats&) = default;
};

/// A non-fatal finding. `locator` is a CVE id, or a decimal byte offset into
/// the decoded feed when no id is known.
struct Diagnostic {
  int feed_year = 0;
  std::string locator;
  std::string message;

  /// `WARN <feed_year> <locator> <message>`
  std::string format() const;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Outcome of a streamed parse; records went to the caller's sink.
struct FeedSummary {
  FeedStats stats;
  std::vector<Diagnostic> diagnostics;
  /// SHA-256 of the decoded feed bytes.
  std::string content_sha256;
  bool compressed = false;
};

struct FeedResult {
  std::vector<CveRecord> records;
  FeedStats stats;
  std::vector<Diagnostic> diagnostics;
  std::string content_sha256;
};

using RecordSink = std::function<void(CveRecord&&)>;

/// Streams `source` (plain or gzip JSON), calling `sink` once per item in file
/// order. Throws MalformedFeed for a non-JSON document or a missing/non-array
/// `CVE_Items`.
FeedSummary stream_feed(std::istream& source, int feed_year, const RecordSink& sink);

FeedResult parse_feed(std::istream& source, int feed_year);

/// Year from a `nvdcve-1.1-<YYYY>.json[.gz]` file name.
std::optional<int> feed_year_from_filename(const std::filesystem::path& path);

/// Resolves the year (override first, then file name) or throws YearUndeterminable.
int resolve_feed_year(const std::filesystem::path& path, std::optional<int> year_override);

/// Throws FileUnreadable, YearUndeterminable, or MalformedFeed.
FeedSummary stream_feed_file(const std::filesystem::path& path, const RecordSink& sink,
                             std::optional<int> year_override = std::nullopt);

FeedResult parse_feed_file(const std::filesystem::path& path, std::optional<int> year_override = std::nullopt);

/// Every `problemtype_data[*].description[*].value` token under a
/// `problemtype` node, in document order and not deduplicated. A null node
/// (absent key) gives an empty list. Shapes that do not match the feed layout
/// are skipped; a note for each is appended to `notes` when given.
std::vector<CweId> extract_cwes(const nlohmann::json& problemtype, std::vector<std::string>* notes = nullptr);

}  // namespace cwe_analyzer
