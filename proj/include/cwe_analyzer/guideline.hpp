#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "cwe_analyzer/cwe_model.hpp"

namespace cwe_analyzer {

/// OWASP Top 10 (2017) categories A1..A10 with their CWE members as listed
/// by MITRE's CWE-1026 view. A9 has no member and is flagged no_single_cwe.
const GuidelineCatalog& builtin_owasp_2017();

/// Names accepted by `--builtin`.
std::vector<std::string> builtin_catalog_names();
/// Throws std::out_of_range for an unknown name.
const GuidelineCatalog& builtin_catalog(std::string_view name);

/// Reads a catalog document:
///
///   {"name": "...",
///    "categories": [{"id": "A1", "title": "...", "cwes": ["CWE-77", ...]},
///                   {"id": "A9", "title": "...", "cwes": [], "no_single_cwe": true}]}
///
/// `title`, `cwes` and `no_single_cwe` are optional. Throws CatalogSyntax when
/// the text is not JSON or a field has the wrong type, CatalogInvalid for a
/// repeated category id or a token that is not `CWE-<n>`.
GuidelineCatalog load_catalog(std::string_view document);
GuidelineCatalog load_catalog(std::istream& in);

/// Inverse of load_catalog (pretty-printed, trailing newline).
std::string serialize_catalog(const GuidelineCatalog& catalog);

/// Splits the table's assignments into covered / uncovered / special against
/// the catalog. An assignment whose weakness sits in several categories is
/// covered once but counted in each of those categories.
CoverageReport coverage(const CweCountTable& table, const GuidelineCatalog& catalog);

struct Rank1Comparison {
  CweId table_rank1 = CweId::parse("");
  std::uint64_t table_rank1_count = 0;
  std::string catalog_first_category;
  std::vector<CweId> catalog_first_set;
  bool agrees = false;

  friend bool operator==(const Rank1Comparison&, const Rank1Comparison&) = default;
};

/// Does the most frequent weakness belong to the guideline's first category?
/// Throws EmptyTable when the table has no weakness entry and
/// std::invalid_argument for a catalog without categories.
Rank1Comparison compare_rank1(const CweCountTable& table, const GuidelineCatalog& catalog);

}  // namespace cwe_analyzer
