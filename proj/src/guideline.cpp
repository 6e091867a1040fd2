#include "cwe_analyzer/guideline.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "cwe_analyzer/aggregator.hpp"
#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

namespace {

using json = nlohmann::json;

constexpr std::string_view kOwasp2017Key = "owasp2017";

GuidelineCategory category(std::string id, std::string title, std::initializer_list<std::uint32_t> numbers) {
  GuidelineCategory c{std::move(id), std::move(title), {}, false};
  for (auto n : numbers) c.cwes.push_back(CweId::weakness(n));
  return c;
}

GuidelineCatalog make_owasp_2017() {
  std::vector<GuidelineCategory> categories;
  categories.push_back(category("A1", "Injection", {77, 78, 88, 89, 90, 91, 564, 917, 943}));
  categories.push_back(category("A2", "Broken Authentication", {287, 256, 308, 384, 522, 523, 613, 620, 640}));
  categories.push_back(
      category("A3", "Sensitive Data Exposure", {220, 295, 311, 312, 319, 320, 325, 326, 327, 328, 359}));
  categories.push_back(category("A4", "XML External Entities", {611, 776}));
  categories.push_back(category("A5", "Broken Access Control", {22, 284, 285, 425, 639}));
  categories.push_back(category("A6", "Security Misconfiguration", {16, 209, 548}));
  categories.push_back(category("A7", "Cross Site Scripting", {79}));
  categories.push_back(category("A8", "Insecure Deserialization", {502}));
  auto a9 = category("A9", "Using Components with known vulnerabilities", {});
  a9.no_single_cwe = true;
  categories.push_back(std::move(a9));
  categories.push_back(category("A10", "Insufficient Logging and Monitoring", {223, 778}));
  return GuidelineCatalog("OWASP Top 10 2017", std::move(categories));
}

template <typename T>
T field(const json& object, const char* name, const std::string& where, T fallback) {
  const auto it = object.find(name);
  if (it == object.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw CatalogSyntax(where + ": field '" + name + "' has the wrong type");
  }
}

GuidelineCatalog catalog_from_json(const json& doc) {
  if (!doc.is_object()) throw CatalogSyntax("catalog document must be an object");
  if (!doc.contains("name") || !doc["name"].is_string()) throw CatalogSyntax("catalog needs a string 'name'");
  if (!doc.contains("categories") || !doc["categories"].is_array()) {
    throw CatalogSyntax("catalog needs a 'categories' array");
  }

  std::vector<GuidelineCategory> categories;
  std::size_t index = 0;
  for (const auto& entry : doc["categories"]) {
    const auto where = "categories[" + std::to_string(index++) + "]";
    if (!entry.is_object()) throw CatalogSyntax(where + " is not an object");
    if (!entry.contains("id") || !entry["id"].is_string()) throw CatalogSyntax(where + " needs a string 'id'");

    GuidelineCategory c;
    c.id = entry["id"].get<std::string>();
    c.title = field<std::string>(entry, "title", where, "");
    c.no_single_cwe = field<bool>(entry, "no_single_cwe", where, false);
    for (const auto& token : field<std::vector<std::string>>(entry, "cwes", where, {})) {
      auto cwe = CweId::parse(token);
      if (!cwe.is_weakness()) throw CatalogInvalid(where + ": '" + token + "' is not a CWE-<n> token");
      c.cwes.push_back(std::move(cwe));
    }
    categories.push_back(std::move(c));
  }
  return GuidelineCatalog(doc["name"].get<std::string>(), std::move(categories));
}

}  // namespace

const GuidelineCatalog& builtin_owasp_2017() {
  static const GuidelineCatalog catalog = make_owasp_2017();
  return catalog;
}

std::vector<std::string> builtin_catalog_names() { return {std::string(kOwasp2017Key)}; }

const GuidelineCatalog& builtin_catalog(std::string_view name) {
  if (name == kOwasp2017Key) return builtin_owasp_2017();
  throw std::out_of_range("unknown built-in catalog '" + std::string(name) + "'");
}

GuidelineCatalog load_catalog(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw CatalogSyntax(std::string("catalog is not valid JSON: ") + e.what());
  }
  return catalog_from_json(doc);
}

GuidelineCatalog load_catalog(std::istream& in) {
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return load_catalog(std::string_view(text));
}

std::string serialize_catalog(const GuidelineCatalog& catalog) {
  json categories = json::array();
  for (const auto& c : catalog.categories()) {
    json cwes = json::array();
    for (const auto& cwe : c.cwes) cwes.push_back(cwe.raw());
    json entry = {{"id", c.id}, {"title", c.title}, {"cwes", std::move(cwes)}};
    if (c.no_single_cwe) entry["no_single_cwe"] = true;
    categories.push_back(std::move(entry));
  }
  json doc = {{"name", catalog.name()}, {"categories", std::move(categories)}};
  return doc.dump(2) + "\n";
}

CoverageReport coverage(const CweCountTable& table, const GuidelineCatalog& catalog) {
  CoverageReport report;
  report.catalog_name = catalog.name();
  report.total_assignments = table.total_assignments();

  const auto members = catalog.all_cwes();
  std::set<std::string, std::less<>> member_raws;
  for (const auto& cwe : members) member_raws.insert(cwe.raw());

  for (const auto& [raw, count] : table.counts()) {
    const auto cwe = CweId::parse(raw);
    if (cwe.is_special()) {
      report.special_assignments += count;
    } else if (member_raws.contains(raw)) {
      report.covered_assignments += count;
      report.per_cwe_covered.emplace(raw, count);
    } else {
      report.uncovered_assignments += count;
    }
  }

  for (const auto& c : catalog.categories()) {
    std::uint64_t sum = 0;
    for (const auto& cwe : c.cwes) sum += table.count(cwe.raw());
    report.per_category.emplace_back(c.id, sum);
  }

  std::copy_if(members.begin(), members.end(), std::back_inserter(report.guideline_cwes_absent_from_data),
               [&](const CweId& cwe) { return table.count(cwe.raw()) == 0; });

  report.coverage_fraction =
      Rational::of(report.covered_assignments, report.covered_assignments + report.uncovered_assignments);
  report.fraction_of_total = Rational::of(report.covered_assignments, report.total_assignments);
  return report;
}

Rank1Comparison compare_rank1(const CweCountTable& table, const GuidelineCatalog& catalog) {
  if (catalog.categories().empty()) throw std::invalid_argument("catalog '" + catalog.name() + "' has no categories");
  const auto top = rank(table, 1);
  if (top.empty()) throw EmptyTable("table has no CWE weakness entries to rank");

  const auto& first = catalog.categories().front();
  Rank1Comparison out;
  out.table_rank1 = top.front().cwe;
  out.table_rank1_count = top.front().count;
  out.catalog_first_category = first.id;
  out.catalog_first_set = first.cwes;
  out.agrees = first.contains(out.table_rank1);
  return out;
}

}  // namespace cwe_analyzer
