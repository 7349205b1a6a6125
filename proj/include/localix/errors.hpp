#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace localix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed a configured bound. Never silently truncated.
class SizeLimitError : public Error {
 public:
  SizeLimitError(std::string bound_name, std::uint64_t bound, std::uint64_t requested)
      : Error("size limit exceeded: " + bound_name + " = " + std::to_string(bound) +
              " (requested " + std::to_string(requested) + ")"),
        bound_name_(std::move(bound_name)),
        bound_(bound),
        requested_(requested) {}

  const std::string& bound_name() const noexcept { return bound_name_; }
  std::uint64_t bound() const noexcept { return bound_; }
  std::uint64_t requested() const noexcept { return requested_; }

 private:
  std::string bound_name_;
  std::uint64_t bound_;
  std::uint64_t requested_;
};

/// Input data that violates a structural law (bad dimensions, broken axioms).
class ValidationError : public Error {
 public:
  ValidationError(std::string anchor, const std::string& what)
      : Error(what), anchor_(std::move(anchor)) {}
  const std::string& anchor() const noexcept { return anchor_; }

 private:
  std::string anchor_;
};

/// A caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Two independent computations of the same object disagreed, or a
/// theorem-instance failed. Always a bug, never data.
class InternalDefect : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace localix
