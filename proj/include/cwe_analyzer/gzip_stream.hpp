#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <streambuf>
#include <string>
#include <string_view>
#include <vector>

#include "cwe_analyzer/digest.hpp"

namespace cwe_analyzer {

inline bool has_gzip_magic(std::string_view head) noexcept {
  return head.size() >= 2 && static_cast<unsigned char>(head[0]) == 0x1f &&
         static_cast<unsigned char>(head[1]) == 0x8b;
}

/// Read-only stream buffer over a feed source. Gzip input is recognized by
/// its magic bytes and inflated on the fly (multi-member archives included);
/// anything else passes through unchanged. Decoded bytes are counted and,
/// when requested, hashed. Memory use is a fixed pair of buffers.
///
/// Corrupt or truncated gzip data raises MalformedFeed; a failing source
/// raises FileUnreadable.
class FeedStreamBuf : public std::streambuf {
 public:
  explicit FeedStreamBuf(std::istream& source, bool hash = false);
  ~FeedStreamBuf() override;

  FeedStreamBuf(const FeedStreamBuf&) = delete;
  FeedStreamBuf& operator=(const FeedStreamBuf&) = delete;

  /// Decoded bytes already taken by the reader.
  std::uint64_t bytes_consumed() const noexcept {
    return delivered_ - static_cast<std::uint64_t>(egptr() - gptr());
  }
  bool compressed() const noexcept { return gzip_ != nullptr; }
  /// Digest of all decoded bytes produced so far; empty when hashing is off.
  std::string sha256_hex() const;

 protected:
  int_type underflow() override;

 private:
  struct Inflater;

  std::size_t read_source(char* dst, std::size_t n);
  std::size_t decode_some();

  std::istream& source_;
  std::vector<char> in_;
  std::vector<char> out_;
  std::unique_ptr<Inflater> gzip_;
  std::optional<Sha256> hash_;
  std::uint64_t delivered_ = 0;
  bool started_ = false;
  bool source_eof_ = false;
  std::size_t pending_plain_ = 0;
};

/// Gzip-compresses `data` into a single-member archive.
std::string gzip_compress(std::string_view data, int level = 6);

}  // namespace cwe_analyzer
