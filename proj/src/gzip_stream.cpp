#include "cwe_analyzer/gzip_stream.hpp"

#include <zlib.h>

#include <cstring>
#include <stdexcept>

#include "cwe_analyzer/errors.hpp"

namespace cwe_analyzer {

namespace {
constexpr std::size_t kBufferSize = 1 << 16;
constexpr int kGzipWindowBits = 15 + 16;
}  // namespace

struct FeedStreamBuf::Inflater {
  z_stream z{};
  bool in_member = true;

  Inflater() {
    if (inflateInit2(&z, kGzipWindowBits) != Z_OK) throw std::runtime_error("inflateInit2 failed");
  }
  ~Inflater() { inflateEnd(&z); }
  Inflater(const Inflater&) = delete;
  Inflater& operator=(const Inflater&) = delete;
};

FeedStreamBuf::FeedStreamBuf(std::istream& source, bool hash)
    : source_(source), in_(kBufferSize), out_(kBufferSize) {
  if (hash) hash_.emplace();
  setg(nullptr, nullptr, nullptr);
}

FeedStreamBuf::~FeedStreamBuf() = default;

std::string FeedStreamBuf::sha256_hex() const { return hash_ ? hash_->hex_digest() : std::string{}; }

std::size_t FeedStreamBuf::read_source(char* dst, std::size_t n) {
  source_.read(dst, static_cast<std::streamsize>(n));
  if (source_.bad()) throw FileUnreadable("read error on feed source");
  const auto got = static_cast<std::size_t>(source_.gcount());
  if (got < n) source_eof_ = true;
  return got;
}

// Fills the get area with the next decoded block; returns its size (0 at end).
std::size_t FeedStreamBuf::decode_some() {
  if (!started_) {
    started_ = true;
    const auto n = read_source(in_.data(), in_.size());
    if (has_gzip_magic(std::string_view(in_.data(), n))) {
      gzip_ = std::make_unique<Inflater>();
      gzip_->z.next_in = reinterpret_cast<Bytef*>(in_.data());
      gzip_->z.avail_in = static_cast<uInt>(n);
    } else {
      pending_plain_ = n;
    }
  }

  if (!gzip_) {
    std::size_t n = pending_plain_;
    pending_plain_ = 0;
    if (n == 0 && !source_eof_) n = read_source(in_.data(), in_.size());
    setg(in_.data(), in_.data(), in_.data() + n);
    return n;
  }

  auto& z = gzip_->z;
  for (;;) {
    if (z.avail_in == 0 && !source_eof_) {
      const auto n = read_source(in_.data(), in_.size());
      z.next_in = reinterpret_cast<Bytef*>(in_.data());
      z.avail_in = static_cast<uInt>(n);
    }
    if (z.avail_in == 0) {
      if (gzip_->in_member) throw MalformedFeed(delivered_, "truncated gzip data");
      return 0;
    }
    if (!gzip_->in_member) {
      inflateReset(&z);
      gzip_->in_member = true;
    }
    z.next_out = reinterpret_cast<Bytef*>(out_.data());
    z.avail_out = static_cast<uInt>(out_.size());
    const int ret = inflate(&z, Z_NO_FLUSH);
    const std::size_t produced = out_.size() - z.avail_out;
    if (ret == Z_STREAM_END) {
      gzip_->in_member = false;
    } else if (ret != Z_OK && !(ret == Z_BUF_ERROR && z.avail_in == 0)) {
      throw MalformedFeed(delivered_, std::string("corrupt gzip data: ") + (z.msg ? z.msg : "inflate failed"));
    }
    if (produced > 0) {
      setg(out_.data(), out_.data(), out_.data() + produced);
      return produced;
    }
  }
}

FeedStreamBuf::int_type FeedStreamBuf::underflow() {
  if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
  const auto n = decode_some();
  if (n == 0) return traits_type::eof();
  delivered_ += n;
  if (hash_) hash_->update(std::string_view(eback(), n));
  return traits_type::to_int_type(*gptr());
}

std::string gzip_compress(std::string_view data, int level) {
  z_stream z{};
  if (deflateInit2(&z, level, Z_DEFLATED, kGzipWindowBits, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out;
  std::vector<char> chunk(kBufferSize);
  z.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  z.avail_in = static_cast<uInt>(data.size());
  int ret = Z_OK;
  while (ret != Z_STREAM_END) {
    z.next_out = reinterpret_cast<Bytef*>(chunk.data());
    z.avail_out = static_cast<uInt>(chunk.size());
    ret = deflate(&z, Z_FINISH);
    if (ret != Z_OK && ret != Z_STREAM_END && ret != Z_BUF_ERROR) {
      deflateEnd(&z);
      throw std::runtime_error("deflate failed");
    }
    out.append(chunk.data(), chunk.size() - z.avail_out);
  }
  deflateEnd(&z);
  return out;
}

}  // namespace cwe_analyzer
