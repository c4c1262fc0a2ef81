#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopforge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed .tbl or search-spec text; `line` is 1-based.
class TableParseError : public Error {
public:
  TableParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Syntax error in an identity; `offset` is the byte offset into the source.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

/// A table row or column repeats a value.
class LatinViolation : public Error {
public:
  enum class Line { Row, Column };

  LatinViolation(Line line, int index, int value)
      : Error(std::string(line == Line::Row ? "row " : "column ") + std::to_string(index) +
              " repeats value " + std::to_string(value)),
        line_(line), index_(index), value_(value) {}

  Line line() const { return line_; }
  int index() const { return index_; }
  int value() const { return value_; }

private:
  Line line_;
  int index_;
  int value_;
};

class MissingOperation : public Error {
public:
  using Error::Error;
};

class MissingAssignment : public Error {
public:
  using Error::Error;
};

class UnknownIdentity : public Error {
public:
  explicit UnknownIdentity(const std::string& name) : Error("unknown identity '" + name + "'") {}
};

class CapExceeded : public Error {
public:
  explicit CapExceeded(std::size_t cap)
      : Error("permutation group closure exceeded cap " + std::to_string(cap)), cap_(cap) {}
  std::size_t cap() const { return cap_; }

private:
  std::size_t cap_;
};

class NotNormal : public Error {
public:
  using Error::Error;
};

class NotSupported : public Error {
public:
  using Error::Error;
};

class BudgetExhausted : public Error {
public:
  BudgetExhausted() : Error("search node budget exhausted") {}
};

/// An internal invariant failed; indicates a bug rather than bad input.
class InvariantViolation : public Error {
public:
  using Error::Error;
};

}  // namespace loopforge
