#include "cwe_analyzer/fetcher.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "cwe_analyzer/atomic_file.hpp"
#include "cwe_analyzer/digest.hpp"

namespace cwe_analyzer {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<std::uint64_t> to_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadable("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_download_path(const fs::path& target) {
  static std::atomic<unsigned> counter{0};
  return target.parent_path() / ("." + target.filename().string() + ".part." + std::to_string(::getpid()) + "." +
                                 std::to_string(counter.fetch_add(1)));
}

// GETs `url` into `dest` (or into `body` when dest is empty). Returns the HTTP
// status; file:// URLs answer 200 or 404.
int http_get(const std::string& url, const fs::path& dest, std::string* body, std::chrono::seconds timeout) {
  if (url.starts_with("file://")) {
    const fs::path src = url.substr(7);
    std::error_code ec;
    if (!fs::is_regular_file(src, ec)) return 404;
    if (body) {
      *body = read_text(src);
    } else {
      fs::copy_file(src, dest, fs::copy_options::overwrite_existing, ec);
      if (ec) throw SinkFailure("cannot write " + dest.string() + ": " + ec.message());
    }
    return 200;
  }

  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, url_re)) throw std::invalid_argument("unsupported URL '" + url + "'");
  const std::string origin = m[1].str();
  const std::string path = m[2].matched ? m[2].str() : "/";

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);

  std::ofstream file;
  int status = 0;
  bool sink_failed = false;
  auto on_response = [&](const httplib::Response& response) {
    status = response.status;
    if (status == 200 && !body) {
      file.open(dest, std::ios::binary | std::ios::trunc);
      sink_failed = !file;
    }
    return !sink_failed;
  };
  auto on_data = [&](const char* data, std::size_t n) {
    if (status != 200) return true;
    if (body) {
      body->append(data, n);
      return true;
    }
    file.write(data, static_cast<std::streamsize>(n));
    sink_failed = !file;
    return !sink_failed;
  };

  const auto result = client.Get(path, on_response, on_data);
  if (sink_failed) throw SinkFailure("write failed for " + dest.string());
  if (!result) {
    throw NetworkUnavailable("cannot reach " + origin + ": " + httplib::to_string(result.error()));
  }
  if (file.is_open()) {
    file.close();
    if (!file) throw SinkFailure("write failed for " + dest.string());
  }
  return result->status;
}

bool digests_equal(const std::string& a, const std::string& b) { return lower(a) == lower(b); }

}  // namespace

FeedMeta parse_meta(std::string_view text) {
  FeedMeta meta;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const auto key = trim(std::string_view(line).substr(0, colon));
    const auto value = trim(std::string_view(line).substr(colon + 1));
    if (key == "lastModifiedDate") {
      meta.last_modified = value;
    } else if (key == "size") {
      meta.size = to_u64(value);
    } else if (key == "gzSize") {
      meta.gz_size = to_u64(value);
    } else if (key == "sha256") {
      meta.sha256 = lower(value);
    }
  }
  return meta;
}

std::string expand_url_template(std::string_view tmpl, std::string_view base, int year) {
  std::string out(tmpl);
  auto replace_all = [&](std::string_view from, std::string_view to) {
    for (auto pos = out.find(from); pos != std::string::npos; pos = out.find(from, pos + to.size())) {
      out.replace(pos, from.size(), to);
    }
  };
  std::string_view trimmed_base = base;
  while (trimmed_base.ends_with('/')) trimmed_base.remove_suffix(1);
  replace_all("{base}", trimmed_base);
  replace_all("{year}", std::to_string(year));
  return out;
}

fs::path cached_feed_path(const fs::path& cache_dir, int year) {
  return cache_dir / ("nvdcve-1.1-" + std::to_string(year) + ".json.gz");
}

fs::path cached_meta_path(const fs::path& cache_dir, int year) {
  return cache_dir / ("nvdcve-1.1-" + std::to_string(year) + ".meta");
}

FeedDescriptor fetch_feed(int year, const FetchOptions& options) {
  if (!options.supported_years.contains(year)) {
    throw std::out_of_range("year " + std::to_string(year) + " is outside the supported range " +
                            std::to_string(options.supported_years.first) + "-" +
                            std::to_string(options.supported_years.last));
  }

  FeedDescriptor desc;
  desc.year = year;
  desc.url = expand_url_template(options.feed_url_template, options.base_url, year);
  desc.cache_path = cached_feed_path(options.cache_dir, year);
  const auto meta_path = cached_meta_path(options.cache_dir, year);

  std::error_code ec;
  if (!options.force && fs::is_regular_file(desc.cache_path, ec)) {
    std::optional<std::string> digest;
    try {
      digest = content_sha256(desc.cache_path);
    } catch (const Error&) {
      // Unreadable or corrupt archive: fall through and download again.
    }
    std::optional<FeedMeta> meta;
    if (fs::is_regular_file(meta_path, ec)) meta = parse_meta(read_text(meta_path));
    const bool stale = !digest || (meta && meta->sha256 && !digests_equal(*meta->sha256, *digest));
    if (!stale) {
      desc.from_cache = true;
      desc.sha256 = digest;
      desc.size = fs::file_size(desc.cache_path);
      if (!meta || !meta->sha256) desc.warnings.push_back("no cached .meta; digest not verified against upstream");
      return desc;
    }
    desc.warnings.push_back("cached archive failed verification; downloading again");
  }

  fs::create_directories(options.cache_dir, ec);
  if (ec) throw SinkFailure("cannot create cache directory " + options.cache_dir.string() + ": " + ec.message());

  const auto part = temp_download_path(desc.cache_path);
  auto drop_part = [&] {
    std::error_code ignored;
    fs::remove(part, ignored);
  };

  try {
    const int status = http_get(desc.url, part, nullptr, options.timeout);
    if (status != 200) throw HttpFailure(status, desc.url);

    const auto digest = content_sha256(part);

    std::optional<std::string> meta_text;
    const auto meta_url = expand_url_template(options.meta_url_template, options.base_url, year);
    try {
      std::string body;
      const int meta_status = http_get(meta_url, {}, &body, options.timeout);
      if (meta_status == 200) {
        meta_text = std::move(body);
      } else {
        desc.warnings.push_back(".meta unavailable (HTTP " + std::to_string(meta_status) + "); digest not verified");
      }
    } catch (const NetworkUnavailable& e) {
      desc.warnings.push_back(std::string(".meta unavailable (") + e.what() + "); digest not verified");
    }

    if (meta_text) {
      const auto meta = parse_meta(*meta_text);
      if (!meta.sha256) {
        desc.warnings.push_back(".meta has no sha256 line; digest not verified");
      } else if (!digests_equal(*meta.sha256, digest)) {
        throw DigestMismatch(*meta.sha256, digest);
      }
    }

    fs::rename(part, desc.cache_path, ec);
    if (ec) throw SinkFailure("cannot move download into " + desc.cache_path.string() + ": " + ec.message());
    if (meta_text) {
      write_file_atomically(meta_path, *meta_text);
    } else {
      fs::remove(meta_path, ec);
    }

    desc.sha256 = digest;
    desc.size = fs::file_size(desc.cache_path);
    desc.fetched_at = std::chrono::system_clock::now();
  } catch (...) {
    drop_part();
    throw;
  }
  return desc;
}

PartialFailure::PartialFailure(std::vector<YearOutcome> outcomes)
    : Error([&] {
        std::string msg = "some feeds could not be fetched:";
        for (const auto& o : outcomes) {
          if (!o.descriptor) msg += " " + std::to_string(o.year) + " (" + o.error + ")";
        }
        return msg;
      }()),
      outcomes_(std::move(outcomes)) {}

std::size_t PartialFailure::successes() const noexcept {
  return static_cast<std::size_t>(std::count_if(outcomes_.begin(), outcomes_.end(),
                                                [](const YearOutcome& o) { return o.descriptor.has_value(); }));
}

std::vector<FeedDescriptor> fetch_range(YearRange years, const FetchOptions& options) {
  if (years.last < years.first) throw std::invalid_argument("inverted year range");

  std::vector<YearOutcome> outcomes(static_cast<std::size_t>(years.length()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next.fetch_add(1); i < outcomes.size(); i = next.fetch_add(1)) {
      auto& outcome = outcomes[i];
      outcome.year = years.first + static_cast<int>(i);
      try {
        outcome.descriptor = fetch_feed(outcome.year, options);
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
    }
  };

  const auto jobs = std::clamp<std::size_t>(options.jobs, 1, outcomes.size());
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();

  const bool all_ok = std::all_of(outcomes.begin(), outcomes.end(),
                                  [](const YearOutcome& o) { return o.descriptor.has_value(); });
  if (!all_ok) throw PartialFailure(std::move(outcomes));

  std::vector<FeedDescriptor> out;
  out.reserve(outcomes.size());
  for (auto& o : outcomes) out.push_back(std::move(*o.descriptor));
  return out;
}

}  // namespace cwe_analyzer
