#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cwe_analyzer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input is not a JSON document, or it lacks a `CVE_Items` array.
class MalformedFeed : public Error {
 public:
  MalformedFeed(std::size_t offset, const std::string& what)
      : Error("malformed feed at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class FileUnreadable : public Error {
 public:
  using Error::Error;
};

class YearUndeterminable : public Error {
 public:
  using Error::Error;
};

class YearMismatch : public Error {
 public:
  using Error::Error;
};

class CatalogSyntax : public Error {
 public:
  using Error::Error;
};

class CatalogInvalid : public Error {
 public:
  using Error::Error;
};

class EmptyTable : public Error {
 public:
  using Error::Error;
};

class SinkFailure : public Error {
 public:
  using Error::Error;
};

class NetworkUnavailable : public Error {
 public:
  using Error::Error;
};

class DigestMismatch : public Error {
 public:
  DigestMismatch(const std::string& expected, const std::string& actual)
      : Error("sha256 mismatch: expected " + expected + ", got " + actual),
        expected_(expected),
        actual_(actual) {}

  const std::string& expected() const noexcept { return expected_; }
  const std::string& actual() const noexcept { return actual_; }

 private:
  std::string expected_;
  std::string actual_;
};

class HttpFailure : public Error {
 public:
  HttpFailure(int status, const std::string& url)
      : Error("HTTP " + std::to_string(status) + " for " + url), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace cwe_analyzer
