#include "cwe_analyzer/cwe_model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

namespace {

constexpr std::string_view kWeaknessPrefix = "CWE-";

bool all_digits(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string_view to_string(CweKind kind) noexcept {
  switch (kind) {
    case CweKind::Weakness:
      return "weakness";
    case CweKind::NoInfo:
      return "noinfo";
    case CweKind::Other:
      return "other";
    case CweKind::Unrecognized:
      break;
  }
  return "unrecognized";
}

CweId CweId::parse(std::string_view token) {
  if (token == kNoInfoToken) return CweId(CweKind::NoInfo, 0, std::string(token));
  if (token == kOtherToken) return CweId(CweKind::Other, 0, std::string(token));

  if (token.starts_with(kWeaknessPrefix)) {
    const auto digits = token.substr(kWeaknessPrefix.size());
    // A leading zero would not survive re-rendering, so it is not a weakness.
    if (all_digits(digits) && digits.front() != '0') {
      std::uint32_t value = 0;
      const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (ec == std::errc{} && end == digits.data() + digits.size()) {
        return CweId(CweKind::Weakness, value, std::string(token));
      }
    }
  }
  return CweId(CweKind::Unrecognized, 0, std::string(token));
}

CweId CweId::weakness(std::uint32_t number) {
  if (number == 0) throw std::invalid_argument("CWE number must be positive");
  return CweId(CweKind::Weakness, number, std::string(kWeaknessPrefix) + std::to_string(number));
}

bool report_order_less(const CweId& a, const CweId& b) noexcept {
  if (a.is_weakness() != b.is_weakness()) return a.is_weakness();
  if (a.is_weakness()) return *a.number() < *b.number();
  return a.raw() < b.raw();
}

bool is_valid_cve_id(std::string_view id) noexcept {
  // CVE-YYYY-NNNN...
  if (id.size() < 13 || !id.starts_with("CVE-") || id[8] != '-') return false;
  return all_digits(id.substr(4, 4)) && all_digits(id.substr(9));
}

CveRecord::CveRecord(std::string cve_id, int feed_year, std::vector<CweId> cwes)
    : cve_id_(std::move(cve_id)), feed_year_(feed_year), cwes_(std::move(cwes)) {
  if (!is_valid_cve_id(cve_id_)) throw std::invalid_argument("not a CVE id: '" + cve_id_ + "'");
  std::sort(cwes_.begin(), cwes_.end());
  cwes_.erase(std::unique(cwes_.begin(), cwes_.end()), cwes_.end());
}

bool CveRecord::contains(const CweId& cwe) const noexcept {
  return std::binary_search(cwes_.begin(), cwes_.end(), cwe);
}

YearRange envelope(const YearRange& a, const YearRange& b) noexcept {
  return YearRange{std::min(a.first, b.first), std::max(a.last, b.last)};
}

CweCountTable CweCountTable::from_counts(
    std::initializer_list<std::pair<std::string_view, std::uint64_t>> counts, std::optional<YearRange> years,
    std::optional<std::uint64_t> total_records) {
  CountMap map;
  for (const auto& [raw, n] : counts) map[std::string(raw)] += n;
  return from_counts(map, years, total_records);
}

CweCountTable CweCountTable::from_counts(const CountMap& counts, std::optional<YearRange> years,
                                         std::optional<std::uint64_t> total_records) {
  CweCountTable table;
  table.years_ = years;
  std::uint64_t largest = 0;
  for (const auto& [raw, n] : counts) {
    if (n == 0) continue;
    table.counts_.emplace(raw, n);
    table.total_assignments_ += n;
    largest = std::max(largest, n);
  }
  table.total_records_ = total_records.value_or(largest);
  if (table.total_records_ < largest) {
    throw std::invalid_argument("total_records is smaller than a single token's count");
  }
  return table;
}

void CweCountTable::add(const CveRecord& record) {
  for (const auto& cwe : record.cwes()) {
    auto it = counts_.find(cwe.raw());
    if (it == counts_.end()) {
      counts_.emplace(cwe.raw(), 1);
    } else {
      ++it->second;
    }
  }
  total_assignments_ += record.cwes().size();
  ++total_records_;
}

std::uint64_t CweCountTable::count(std::string_view raw) const noexcept {
  const auto it = counts_.find(raw);
  return it == counts_.end() ? 0 : it->second;
}

CweCountTable merge(const CweCountTable& a, const CweCountTable& b) {
  CweCountTable out = a;
  for (const auto& [raw, n] : b.counts_) out.counts_[raw] += n;
  out.total_assignments_ += b.total_assignments_;
  out.total_records_ += b.total_records_;
  if (!out.years_) {
    out.years_ = b.years_;
  } else if (b.years_) {
    out.years_ = envelope(*out.years_, *b.years_);
  }
  return out;
}

bool GuidelineCategory::contains(const CweId& cwe) const noexcept {
  return std::find(cwes.begin(), cwes.end(), cwe) != cwes.end();
}

GuidelineCatalog::GuidelineCatalog(std::string name, std::vector<GuidelineCategory> categories)
    : name_(std::move(name)), categories_(std::move(categories)) {
  std::set<std::string, std::less<>> ids;
  std::map<std::string, std::string, std::less<>> owner;  // raw -> first category id
  for (auto& category : categories_) {
    if (category.id.empty()) throw CatalogInvalid("category with empty id in catalog '" + name_ + "'");
    if (!ids.insert(category.id).second) throw CatalogInvalid("duplicate category id '" + category.id + "'");
    for (const auto& cwe : category.cwes) {
      if (!cwe.is_weakness()) {
        throw CatalogInvalid("category '" + category.id + "' lists '" + cwe.raw() + "', which is not a CWE id");
      }
    }
    if (category.no_single_cwe && !category.cwes.empty()) {
      throw CatalogInvalid("category '" + category.id + "' is flagged no_single_cwe but lists weaknesses");
    }
    std::sort(category.cwes.begin(), category.cwes.end(), report_order_less);
    category.cwes.erase(std::unique(category.cwes.begin(), category.cwes.end()), category.cwes.end());
    for (const auto& cwe : category.cwes) {
      const auto [it, inserted] = owner.emplace(cwe.raw(), category.id);
      if (!inserted) {
        warnings_.push_back(cwe.raw() + " appears in both '" + it->second + "' and '" + category.id + "'");
      }
    }
  }
}

const GuidelineCategory* GuidelineCatalog::find(std::string_view id) const noexcept {
  for (const auto& category : categories_) {
    if (category.id == id) return &category;
  }
  return nullptr;
}

bool GuidelineCatalog::contains(const CweId& cwe) const noexcept {
  return std::any_of(categories_.begin(), categories_.end(),
                     [&](const GuidelineCategory& c) { return c.contains(cwe); });
}

std::vector<CweId> GuidelineCatalog::all_cwes() const {
  std::vector<CweId> out;
  for (const auto& category : categories_) out.insert(out.end(), category.cwes.begin(), category.cwes.end());
  std::sort(out.begin(), out.end(), report_order_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational Rational::of(std::uint64_t numerator, std::uint64_t denominator) noexcept {
  if (denominator == 0 || numerator == 0) return Rational{0, 1};
  const auto g = std::gcd(numerator, denominator);
  return Rational{numerator / g, denominator / g};
}

}  // namespace cwe_analyzer
