#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace falsilab {

enum class ErrorKind {
  Syntax,
  UnknownSymbol,
  Arity,
  SignatureMismatch,
  EmptyDomain,
  InvalidArgument,
  BudgetExceeded,
  CapExceeded,
  UnboundVariable,
  OpenFormula,
  InconsistentObservations,
  NotASubclass,
  ReducibleChain,
  ExtensionUnsolvable,
  DuplicateTime,
  SizeOverflow,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Syntax errors carry a 1-based line and column.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Limits shared by the enumeration-heavy searches.
struct Budget {
  std::uint64_t enumeration = std::uint64_t{1} << 26;
  std::uint64_t search_nodes = std::uint64_t{1} << 30;
  int canonical_size_cap = 10;
};

}  // namespace falsilab
