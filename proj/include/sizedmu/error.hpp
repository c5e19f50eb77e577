#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sizedmu {

enum class ErrorKind {
  NonFunctorialDiagram,
  NotDirected,
  NoSuchIndex,
  IllTypedArrow,
  IndexMismatch,
  InfiniteArity,
  ShapeMismatch,
  NonInvertibleGroupoidArrow,
  BudgetExceeded,
  NoAlgebra,
  SyntaxError,
  NameError,
  InternalInvariant,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonFunctorialDiagram: return "NonFunctorialDiagram";
    case ErrorKind::NotDirected: return "NotDirected";
    case ErrorKind::NoSuchIndex: return "NoSuchIndex";
    case ErrorKind::IllTypedArrow: return "IllTypedArrow";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::InfiniteArity: return "InfiniteArity";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonInvertibleGroupoidArrow: return "NonInvertibleGroupoidArrow";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NoAlgebra: return "NoAlgebra";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::NameError: return "NameError";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// that drivers can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse diagnostics keep the 1-based source position.
class SourceError : public Error {
 public:
  SourceError(ErrorKind kind, const std::string& what, std::size_t line,
              std::size_t column)
      : Error(kind, what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace sizedmu
