#include "cwe_analyzer/atomic_file.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <system_error>

#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

namespace fs = std::filesystem;

namespace {

fs::path temp_sibling(const fs::path& path) {
  static std::atomic<unsigned> counter{0};
  auto name = "." + path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
              std::to_string(counter.fetch_add(1));
  return path.parent_path() / name;
}

void write_temp(const fs::path& tmp, std::string_view content) {
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw SinkFailure("cannot create " + tmp.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw SinkFailure("write failed for " + tmp.string());
  }
}

void ensure_parent(const fs::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw SinkFailure("cannot create directory " + parent.string() + ": " + ec.message());
}

}  // namespace

void write_file_atomically(const fs::path& path, std::string_view content) {
  ensure_parent(path);
  const auto tmp = temp_sibling(path);
  write_temp(tmp, content);
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw SinkFailure("cannot rename into " + path.string() + ": " + ec.message());
  }
}

void OutputBatch::stage(fs::path path, std::string content) {
  paths_.push_back(std::move(path));
  contents_.push_back(std::move(content));
}

void OutputBatch::commit() {
  std::vector<fs::path> temps;
  auto discard = [&] {
    std::error_code ignored;
    for (const auto& t : temps) fs::remove(t, ignored);
  };
  try {
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      ensure_parent(paths_[i]);
      temps.push_back(temp_sibling(paths_[i]));
      write_temp(temps.back(), contents_[i]);
    }
  } catch (...) {
    discard();
    throw;
  }
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], paths_[i], ec);
    if (ec) {
      discard();
      throw SinkFailure("cannot rename into " + paths_[i].string() + ": " + ec.message());
    }
  }
}

}  // namespace cwe_analyzer
