#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

struct evp_md_ctx_st;

namespace cwe_analyzer {

/// Incremental SHA-256 (OpenSSL EVP).
class Sha256 {
 public:
  Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;
  ~Sha256();

  void update(std::string_view bytes);
  /// Lower-case hex of everything passed to update(). Does not reset.
  std::string hex_digest() const;

 private:
  struct Free {
    void operator()(evp_md_ctx_st* ctx) const noexcept;
  };
  std::unique_ptr<evp_md_ctx_st, Free> ctx_;
};

std::string sha256_hex(std::string_view bytes);

/// SHA-256 of a file's content after gzip decoding (if it is gzip). This is
/// the digest NVD publishes in its `.meta` files. Throws FileUnreadable.
std::string content_sha256(const std::filesystem::path& path);

}  // namespace cwe_analyzer
