#pragma once

#include <stdexcept>
#include <string>

namespace delin {

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define DELIN_ERROR(Name)                                             \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  };

DELIN_ERROR(DivisionByZeroExpr)
DELIN_ERROR(NonPolynomialBinding)
DELIN_ERROR(NonPolynomialInJet)
DELIN_ERROR(PivotViolation)
DELIN_ERROR(CompletionBudgetExceeded)
DELIN_ERROR(IrregularPoint)
DELIN_ERROR(UnresolvedPivot)
DELIN_ERROR(NotAnODE)
DELIN_ERROR(TargetNotLinear)
DELIN_ERROR(SingularJacobian)
DELIN_ERROR(DerivedFallback)
DELIN_ERROR(UndeclaredName)
DELIN_ERROR(InvalidInput)

#undef DELIN_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int col)
      : Error("ParseError", std::to_string(line) + ":" + std::to_string(col) + ": " + what), line_(line), col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_, col_;
};

}  // namespace delin
