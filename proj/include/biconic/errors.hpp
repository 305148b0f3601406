#pragma once

#include <stdexcept>
#include <string>

namespace biconic {

enum class ErrorKind {
  InvalidArgument,
  ZeroInput,
  NonsimpleRoot,
  NotARoot,
  PrecisionExhausted,
  UnsupportedDegree,
  NotIrreducible,
  FieldMismatch,
  ZeroForm,
  DegenerateConic,
  SearchBudgetExceeded,
  PointNotOnConic,
  CommonComponent,
  DegenerateData,
  IdenticallySingularPencil,
  IndeterminatePoint,
  PointNotOnSurface,
  SingularFiber,
  NoRationalPoint,
  SingularFiberAtNode,
  ForbiddenParameter,
  SeedOnSingularFiber,
  TargetNotLiftable,
  BadPrime,
  NotSmoothModP,
  IncompatiblePrime,
  Parse,
  Internal,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::NonsimpleRoot: return "NonsimpleRoot";
    case ErrorKind::NotARoot: return "NotARoot";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroForm: return "ZeroForm";
    case ErrorKind::DegenerateConic: return "DegenerateConic";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::PointNotOnConic: return "PointNotOnConic";
    case ErrorKind::CommonComponent: return "CommonComponent";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::IdenticallySingularPencil: return "IdenticallySingularPencil";
    case ErrorKind::IndeterminatePoint: return "IndeterminatePoint";
    case ErrorKind::PointNotOnSurface: return "PointNotOnSurface";
    case ErrorKind::SingularFiber: return "SingularFiber";
    case ErrorKind::NoRationalPoint: return "NoRationalPoint";
    case ErrorKind::SingularFiberAtNode: return "SingularFiberAtNode";
    case ErrorKind::ForbiddenParameter: return "ForbiddenParameter";
    case ErrorKind::SeedOnSingularFiber: return "SeedOnSingularFiber";
    case ErrorKind::TargetNotLiftable: return "TargetNotLiftable";
    case ErrorKind::BadPrime: return "BadPrime";
    case ErrorKind::NotSmoothModP: return "NotSmoothModP";
    case ErrorKind::IncompatiblePrime: return "IncompatiblePrime";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Domain error carrying a machine-readable kind. The message is prefixed
/// with the kind name so that CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace biconic
