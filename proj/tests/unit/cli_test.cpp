#include <gtest/gtest.h>

#include <sstream>

#include "cwe_analyzer/cli.hpp"
#include "cwe_analyzer/gzip_stream.hpp"
#include "test_support.hpp"

namespace cwe_analyzer {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "cwe-analyzer");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::size_t file_count(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
}

void publish(cwe_test::MockServer& server, int year) {
  const auto text = cwe_test::make_feed(
      {{"CVE-" + std::to_string(year) + "-1000", std::vector<std::vector<std::string>>{{"CWE-79"}}}});
  server.route("/feeds/nvdcve-1.1-" + std::to_string(year) + ".json.gz", 200, gzip_compress(text));
}

TEST(CliFetch, TenYearRange) {
  cwe_test::MockServer server;
  for (int y = 2010; y <= 2019; ++y) publish(server, y);
  cwe_test::TempDir cache;
  const auto r = run({"fetch", "--years", "2010-2019", "--base-url", server.base_url(), "--cache-dir",
                      cache.path().string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(lines_of(r.out).size(), 10u);
  for (int y = 2010; y <= 2019; ++y) {
    EXPECT_TRUE(fs::is_regular_file(cache / ("nvdcve-1.1-" + std::to_string(y) + ".json.gz"))) << y;
  }

  const auto again = run({"fetch", "--years", "2019", "--base-url", server.base_url(), "--cache-dir",
                          cache.path().string()});
  EXPECT_EQ(again.status, 0);
  EXPECT_NE(again.out.find("2019 cached"), std::string::npos) << again.out;
}

TEST(CliFetch, InvertedRangeIsUsageError) {
  cwe_test::TempDir cache;
  EXPECT_EQ(run({"fetch", "--years", "2019-2010", "--cache-dir", cache.path().string()}).status, 2);
  EXPECT_TRUE(fs::is_empty(cache.path()));
}

TEST(CliFetch, FailedYearExitsNonZero) {
  cwe_test::MockServer server;
  publish(server, 2018);
  cwe_test::TempDir cache;
  const auto r = run({"fetch", "--years", "2018-2019", "--base-url", server.base_url(), "--cache-dir",
                      cache.path().string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("2019 FAILED"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::is_regular_file(cache / "nvdcve-1.1-2018.json.gz"));
}

TEST(CliRank, TopThreeMatchesOracle) {
  cwe_test::TempDir out;
  const auto r = run({"rank", "--input", cwe_test::fixture50().string(), "--top", "3", "--out", out.path().string()});
  ASSERT_EQ(r.status, 0) << r.err;

  const auto oracle = cwe_test::oracle_top(cwe_test::oracle_count_feed(cwe_test::read_file(cwe_test::fixture50())).counts, 3);
  const auto rows = lines_of(cwe_test::read_file(out / "ranking.csv"));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(rows[i + 1], oracle[i].first + "," + std::to_string(oracle[i].second));
  }
  EXPECT_EQ(cwe_test::read_file(out / "counts.csv"),
            cwe_test::read_file(cwe_test::data_dir() / "fixture50" / "counts.golden.csv"));
  for (const char* name : {"counts_by_year.csv", "ranking.json", "manifest.json"}) {
    EXPECT_TRUE(fs::is_regular_file(out / name)) << name;
  }
  const auto manifest = nlohmann::json::parse(cwe_test::read_file(out / "manifest.json"));
  ASSERT_EQ(manifest["feeds"].size(), 1u);
  EXPECT_EQ(manifest["feeds"][0]["year"], 2019);
}

TEST(CliRank, TopZeroIsUsageError) {
  cwe_test::TempDir out;
  const auto r = run({"rank", "--input", cwe_test::fixture50().string(), "--top", "0", "--out", (out / "o").string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(fs::exists(out / "o"));
}

TEST(CliRank, MalformedFeedFailsWithoutOutputs) {
  cwe_test::TempDir dir;
  cwe_test::write_file(dir / "nvdcve-1.1-2019.json", "{\"CVE_Items\": [ {\"cve\": ");
  const auto r = run({"rank", "--input", (dir / "nvdcve-1.1-2019.json").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
  EXPECT_EQ(file_count(dir / "out"), 0u);
}

TEST(CliRank, UnwritableOutputLeavesNoPartialFiles) {
  cwe_test::TempDir dir;
  cwe_test::write_file(dir / "blocker", "not a directory");
  const auto r = run({"rank", "--input", cwe_test::fixture50().string(), "--out", (dir / "blocker" / "out").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(file_count(dir.path()), 1u);
}

TEST(CliRank, YearsReadFromCache) {
  cwe_test::TempDir cache;
  cwe_test::write_file(cache / "nvdcve-1.1-2019.json.gz", gzip_compress(cwe_test::read_file(cwe_test::fixture50())));
  cwe_test::TempDir out;
  const auto r = run({"rank", "--years", "2019", "--cache-dir", cache.path().string(), "--out", out.path().string()});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(cwe_test::read_file(out / "counts.csv"),
            cwe_test::read_file(cwe_test::data_dir() / "fixture50" / "counts.golden.csv"));
}

TEST(CliCoverage, FixturePartition) {
  cwe_test::TempDir out;
  const auto r = run({"coverage", "--input", cwe_test::fixture50().string(), "--builtin", "owasp2017", "--out",
                      out.path().string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("covered=18 uncovered=29 special=5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("coverage_fraction=18/47"), std::string::npos);
  EXPECT_NE(r.out.find("fraction_of_total=9/26"), std::string::npos);
  EXPECT_NE(r.out.find("rank1=CWE-119 count=7 first_category=A1 agrees=false"), std::string::npos);

  const auto doc = nlohmann::json::parse(cwe_test::read_file(out / "coverage.json"));
  EXPECT_EQ(doc["covered_assignments"].get<std::uint64_t>() + doc["uncovered_assignments"].get<std::uint64_t>() +
                doc["special_assignments"].get<std::uint64_t>(),
            doc["total_assignments"].get<std::uint64_t>());
  EXPECT_TRUE(fs::is_regular_file(out / "coverage_chart.csv"));
  EXPECT_TRUE(fs::is_regular_file(out / "coverage_chart.json"));
}

TEST(CliCoverage, NoInputsIsUsageError) {
  cwe_test::TempDir out;
  EXPECT_EQ(run({"coverage", "--builtin", "owasp2017", "--out", out.path().string()}).status, 2);
}

TEST(CliCoverage, InvalidCatalogFails) {
  cwe_test::TempDir dir;
  cwe_test::write_file(dir / "bad.json", R"({"name": "x", "categories": [{"id": "A1", "cwes": ["XSS"]}]})");
  const auto r = run({"coverage", "--input", cwe_test::fixture50().string(), "--catalog", (dir / "bad.json").string(),
                      "--out", (dir / "out").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(file_count(dir / "out"), 0u);
}

TEST(CliCoverage, CustomCatalog) {
  cwe_test::TempDir dir;
  cwe_test::write_file(dir / "cat.json",
                       R"({"name": "tiny", "categories": [{"id": "T1", "title": "Memory", "cwes": ["CWE-119"]}]})");
  const auto r = run({"coverage", "--input", cwe_test::fixture50().string(), "--catalog", (dir / "cat.json").string(),
                      "--out", (dir / "out").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("covered=7 uncovered=40 special=5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("agrees=true"), std::string::npos);
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run({"frobnicate"}).status, 2);
  EXPECT_EQ(run({}).status, 2);
}

}  // namespace
}  // namespace cwe_analyzer
