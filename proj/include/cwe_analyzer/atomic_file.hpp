#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cwe_analyzer {

/// Writes `content` to a temporary sibling of `path`, then renames it into
/// place. Throws SinkFailure; no partial file is left behind.
void write_file_atomically(const std::filesystem::path& path, std::string_view content);

/// A set of output files committed together. stage() only records content;
/// commit() writes every file to a temporary sibling first and renames them
/// only once all writes succeeded.
class OutputBatch {
 public:
  void stage(std::filesystem::path path, std::string content);
  void commit();

  const std::vector<std::filesystem::path>& paths() const noexcept { return paths_; }

 private:
  std::vector<std::filesystem::path> paths_;
  std::vector<std::string> contents_;
};

}  // namespace cwe_analyzer
