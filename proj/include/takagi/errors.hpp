#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace takagi {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed DSL text. `offset` is a byte offset into the parsed source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownSymbolError : public Error {
 public:
  UnknownSymbolError(const std::string& symbol, std::size_t offset)
      : Error("unknown symbol '" + symbol + "' at offset " + std::to_string(offset)),
        symbol_(symbol),
        offset_(offset) {}
  const std::string& symbol() const noexcept { return symbol_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string symbol_;
  std::size_t offset_;
};

// Numeric evaluation hit a domain problem (division by zero, log of a
// non-positive real, ...). `subexpression` is the printed offending node.
class EvalError : public Error {
 public:
  EvalError(const std::string& reason, const std::string& subexpression)
      : Error(reason + " in '" + subexpression + "'"),
        reason_(reason),
        subexpression_(subexpression) {}
  const std::string& reason() const noexcept { return reason_; }
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string reason_;
  std::string subexpression_;
};

// Invalid user input (metric file, CLI arguments, mismatched shapes).
class InputError : public Error {
 public:
  using Error::Error;
};

// Problem in a metric file; `line` is 1-based (0 when not tied to a line).
class MetricFileError : public InputError {
 public:
  MetricFileError(const std::string& origin, std::size_t line, const std::string& what)
      : InputError(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SingularMetricError : public Error {
 public:
  SingularMetricError(const std::string& what, std::vector<double> point)
      : Error(what), point_(std::move(point)) {}
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

class ZeroPivotError : public Error {
 public:
  explicit ZeroPivotError(std::size_t pivot)
      : Error("zero pivot at index " + std::to_string(pivot + 1)), pivot_(pivot) {}
  // 0-based pivot position.
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace takagi
