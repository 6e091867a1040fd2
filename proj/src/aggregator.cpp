#include "cwe_analyzer/aggregator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

CweCountTable aggregate(std::span<const CveRecord> records, int year) {
  CweCountTable table(year);
  for (const auto& record : records) {
    if (record.feed_year() != year) {
      throw YearMismatch(record.cve_id() + " belongs to feed year " + std::to_string(record.feed_year()) +
                         ", not " + std::to_string(year));
    }
    table.add(record);
  }
  return table;
}

bool rank_order_less(const CweId& a, std::uint64_t count_a, const CweId& b, std::uint64_t count_b) noexcept {
  if (count_a != count_b) return count_a > count_b;
  return report_order_less(a, b);
}

std::vector<RankedEntry> rank(const CweCountTable& table, std::size_t n, bool include_special) {
  if (n == 0) throw std::invalid_argument("rank: n must be at least 1");

  std::vector<std::pair<CweId, std::uint64_t>> entries;
  entries.reserve(table.counts().size());
  for (const auto& [raw, count] : table.counts()) {
    auto cwe = CweId::parse(raw);
    if (cwe.is_weakness() || include_special) entries.emplace_back(std::move(cwe), count);
  }

  const auto take = std::min(n, entries.size());
  const auto less = [](const auto& a, const auto& b) { return rank_order_less(a.first, a.second, b.first, b.second); };
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(take), entries.end(), less);

  std::vector<RankedEntry> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back(RankedEntry{static_cast<std::uint32_t>(i + 1), std::move(entries[i].first), entries[i].second});
  }
  return out;
}

}  // namespace cwe_analyzer
