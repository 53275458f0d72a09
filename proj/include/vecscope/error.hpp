#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vecscope {

// Base class for every failure caused by user data or user input. The CLI maps
// these to exit code 1 and the HTTP API maps them to status 400.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed vector file: unreadable, ragged rows, non-finite values, empty.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OovError : public Error {
 public:
  // `context` prefixes the message, e.g. "row 3".
  explicit OovError(std::vector<std::string> missing, const std::string& context = {});

  const std::vector<std::string>& missing() const { return missing_; }

 private:
  std::vector<std::string> missing_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error("parse error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset) {}

  // Byte offset into the expression text.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Rejection or projection against a vector of zero length, and cosine over
// zero-norm inputs.
class ZeroAxisError : public Error {
 public:
  using Error::Error;
};

// Preconditions on counts, k, n and similar.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Requested more components than the data supports.
class RankError : public Error {
 public:
  using Error::Error;
};

}  // namespace vecscope
