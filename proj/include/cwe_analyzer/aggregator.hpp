#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cwe_analyzer/cwe_model.hpp"

namespace cwe_analyzer {

/// Counts the records of one feed year. Throws YearMismatch if any record
/// carries another year.
CweCountTable aggregate(std::span<const CveRecord> records, int year);

// merge(a, b) is declared with CweCountTable; it is a commutative monoid with
// the default-constructed table as identity.

/// Top-`n` entries ordered by count descending, then CWE number ascending.
/// Special and unrecognized tokens are left out unless `include_special`,
/// in which case they follow the weaknesses of equal count (ordered by raw
/// token). Throws std::invalid_argument when n == 0.
std::vector<RankedEntry> rank(const CweCountTable& table, std::size_t n, bool include_special = false);

/// Strict-weak order used by rank(): higher count first, then report order.
bool rank_order_less(const CweId& a, std::uint64_t count_a, const CweId& b, std::uint64_t count_b) noexcept;

}  // namespace cwe_analyzer
