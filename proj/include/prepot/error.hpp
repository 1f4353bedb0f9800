#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prepot {

/// Evaluation left the domain of an operation: zero pivot, branch point,
/// singular metric. The runner treats these as a skipped sample point.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Expression-language parse failure with a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, unknown_function, bad_exponent };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Scenario file problems. `format` covers malformed text, `semantic` a file
/// that parses but references undefined names or has the wrong arity.
class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { io, format, semantic, sampling };

  ScenarioError(Kind kind, const std::string& what);

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace prepot
