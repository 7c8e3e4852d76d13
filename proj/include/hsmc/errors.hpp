#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsmc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text could not be parsed. position() is a 0-based byte offset
/// into the parsed text.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& msg)
      : Error("parse error at offset " + std::to_string(position) + ": " + msg),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A structure or instance invariant does not hold. code() is a short
/// machine-matchable tag like "not-left-total" or "unknown-state".
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
  ValidationError(std::string code, const std::string& msg)
      : Error(msg), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// The formula lies outside the checkable fragments.
class FragmentError : public Error {
 public:
  using Error::Error;
};

/// A valuation-table entry required by the oracle is missing; this means
/// the driver invoked the oracle before filling the tables bottom-up.
class TableError : public Error {
 public:
  using Error::Error;
};

/// Nonpositive exploration budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// The configuration-graph safety cap was hit.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

/// Track index outside 1..|rho|.
class IndexError : public Error {
 public:
  using Error::Error;
};

}  // namespace hsmc
