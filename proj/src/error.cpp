#include "falsilab/error.hpp"

namespace falsilab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnknownSymbol: return "unknown-symbol";
    case ErrorKind::Arity: return "arity";
    case ErrorKind::SignatureMismatch: return "signature-mismatch";
    case ErrorKind::EmptyDomain: return "empty-domain";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::UnboundVariable: return "unbound-variable";
    case ErrorKind::OpenFormula: return "open-formula";
    case ErrorKind::InconsistentObservations: return "inconsistent-observations";
    case ErrorKind::NotASubclass: return "not-a-subclass";
    case ErrorKind::ReducibleChain: return "reducible-chain";
    case ErrorKind::ExtensionUnsolvable: return "extension-unsolvable";
    case ErrorKind::DuplicateTime: return "duplicate-time";
    case ErrorKind::SizeOverflow: return "size-overflow";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : Error(ErrorKind::Syntax,
            message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

}  // namespace falsilab
