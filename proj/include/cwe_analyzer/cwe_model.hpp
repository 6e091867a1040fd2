#pragma once

// Domain types shared by every stage of the pipeline. Nothing here performs
// I/O; all types are values and are immutable once built (CweCountTable
// exposes add() for accumulation, but finished tables are passed by const).

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cwe_analyzer {

inline constexpr std::string_view kNoInfoToken = "NVD-CWE-noinfo";
inline constexpr std::string_view kOtherToken = "NVD-CWE-Other";

enum class CweKind : std::uint8_t { Weakness, NoInfo, Other, Unrecognized };

std::string_view to_string(CweKind kind) noexcept;

/// A problemtype token as it appears in a feed.
///
/// Only the exact form `CWE-<digits>` with no leading zero (and a value that
/// fits 32 bits) is a Weakness; the two NVD markers are matched exactly; any
/// other text is kept verbatim as Unrecognized. Identity is the raw token.
class CweId {
 public:
  static CweId parse(std::string_view token);

  /// Builds `CWE-<number>`. Throws std::invalid_argument for 0.
  static CweId weakness(std::uint32_t number);

  CweKind kind() const noexcept { return kind_; }
  std::optional<std::uint32_t> number() const noexcept {
    if (kind_ != CweKind::Weakness) return std::nullopt;
    return number_;
  }
  const std::string& raw() const noexcept { return raw_; }

  bool is_weakness() const noexcept { return kind_ == CweKind::Weakness; }
  bool is_special() const noexcept { return kind_ != CweKind::Weakness; }

  friend bool operator==(const CweId& a, const CweId& b) noexcept { return a.raw_ == b.raw_; }
  friend std::strong_ordering operator<=>(const CweId& a, const CweId& b) noexcept {
    return a.raw_.compare(b.raw_) <=> 0;
  }

 private:
  CweId(CweKind kind, std::uint32_t number, std::string raw)
      : kind_(kind), number_(number), raw_(std::move(raw)) {}

  CweKind kind_;
  std::uint32_t number_;
  std::string raw_;
};

inline CweId parse_cwe_token(std::string_view token) { return CweId::parse(token); }

/// Report order: weaknesses by ascending number, then everything else by raw
/// byte order.
bool report_order_less(const CweId& a, const CweId& b) noexcept;

/// `CVE-YYYY-NNNN+` with at least four sequence digits.
bool is_valid_cve_id(std::string_view id) noexcept;

/// One vulnerability entry. The weakness set is deduplicated on construction
/// and stored sorted by raw token.
class CveRecord {
 public:
  /// Throws std::invalid_argument when `cve_id` is not a well-formed CVE id.
  CveRecord(std::string cve_id, int feed_year, std::vector<CweId> cwes);

  const std::string& cve_id() const noexcept { return cve_id_; }
  int feed_year() const noexcept { return feed_year_; }
  std::span<const CweId> cwes() const noexcept { return cwes_; }
  bool contains(const CweId& cwe) const noexcept;

  friend bool operator==(const CveRecord&, const CveRecord&) = default;

 private:
  std::string cve_id_;
  int feed_year_;
  std::vector<CweId> cwes_;
};

struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const noexcept { return first <= year && year <= last; }
  int length() const noexcept { return last - first + 1; }

  friend bool operator==(const YearRange&, const YearRange&) = default;
};

YearRange envelope(const YearRange& a, const YearRange& b) noexcept;

using CountMap = std::map<std::string, std::uint64_t, std::less<>>;

/// Frequency of each token over a set of records. Keys are raw tokens; a
/// key is present only while its count is positive.
///
/// The default-constructed table has no year range and is the identity for
/// merge().
class CweCountTable {
 public:
  CweCountTable() = default;
  explicit CweCountTable(int year) : years_(YearRange{year, year}) {}

  /// Table with the given counts. Zero counts are dropped. When
  /// `total_records` is absent the smallest consistent value (the largest
  /// count) is used.
  static CweCountTable from_counts(std::initializer_list<std::pair<std::string_view, std::uint64_t>> counts,
                                   std::optional<YearRange> years = std::nullopt,
                                   std::optional<std::uint64_t> total_records = std::nullopt);
  static CweCountTable from_counts(const CountMap& counts, std::optional<YearRange> years = std::nullopt,
                                   std::optional<std::uint64_t> total_records = std::nullopt);

  /// Counts every weakness of `record` once and bumps total_records.
  void add(const CveRecord& record);

  const std::optional<YearRange>& year_range() const noexcept { return years_; }
  const CountMap& counts() const noexcept { return counts_; }
  std::uint64_t count(std::string_view raw) const noexcept;
  std::uint64_t total_assignments() const noexcept { return total_assignments_; }
  std::uint64_t total_records() const noexcept { return total_records_; }

  friend bool operator==(const CweCountTable&, const CweCountTable&) = default;
  friend CweCountTable merge(const CweCountTable& a, const CweCountTable& b);

 private:
  std::optional<YearRange> years_;
  CountMap counts_;
  std::uint64_t total_assignments_ = 0;
  std::uint64_t total_records_ = 0;
};

struct RankedEntry {
  std::uint32_t rank = 0;
  CweId cwe = CweId::parse("");
  std::uint64_t count = 0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct GuidelineCategory {
  std::string id;
  std::string title;
  std::vector<CweId> cwes;
  /// Set when no single weakness can represent the category (OWASP A9).
  bool no_single_cwe = false;

  bool contains(const CweId& cwe) const noexcept;

  friend bool operator==(const GuidelineCategory&, const GuidelineCategory&) = default;
};

/// An ordered list of named categories, each owning a set of weaknesses.
/// Category order matters: the first category is the guideline's rank 1.
class GuidelineCatalog {
 public:
  /// Validates and normalizes (each category's set sorted by number, deduplicated).
  /// Throws CatalogInvalid for an empty or repeated category id, a member
  /// that is not a Weakness, or a `no_single_cwe` category with members.
  /// A weakness listed under several categories is accepted and noted in warnings().
  GuidelineCatalog(std::string name, std::vector<GuidelineCategory> categories);

  const std::string& name() const noexcept { return name_; }
  const std::vector<GuidelineCategory>& categories() const noexcept { return categories_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  const GuidelineCategory* find(std::string_view id) const noexcept;
  bool contains(const CweId& cwe) const noexcept;
  /// Distinct members across all categories, ascending by number.
  std::vector<CweId> all_cwes() const;

  friend bool operator==(const GuidelineCatalog& a, const GuidelineCatalog& b) noexcept {
    return a.name_ == b.name_ && a.categories_ == b.categories_;
  }

 private:
  std::string name_;
  std::vector<GuidelineCategory> categories_;
  std::vector<std::string> warnings_;
};

/// Non-negative fraction kept in lowest terms; 0/0 is stored as 0/1.
struct Rational {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  static Rational of(std::uint64_t numerator, std::uint64_t denominator) noexcept;
  double value() const noexcept { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  std::string str() const { return std::to_string(numerator) + "/" + std::to_string(denominator); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CoverageReport {
  std::string catalog_name;
  std::uint64_t total_assignments = 0;
  std::uint64_t covered_assignments = 0;
  std::uint64_t uncovered_assignments = 0;
  std::uint64_t special_assignments = 0;
  /// Catalog order.
  std::vector<std::pair<std::string, std::uint64_t>> per_category;
  CountMap per_cwe_covered;
  /// covered / (covered + uncovered), or 0 when nothing is classifiable.
  Rational coverage_fraction;
  /// covered / total_assignments.
  Rational fraction_of_total;
  /// Ascending by number.
  std::vector<CweId> guideline_cwes_absent_from_data;

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

}  // namespace cwe_analyzer
