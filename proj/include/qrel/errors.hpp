#pragma once

#include <stdexcept>
#include <string>

namespace qrel {

enum class ErrorKind {
  ShapeMismatch,
  SortMismatch,
  DuplicateLabel,
  ZeroDimension,
  NotAQuantumRelation,
  FreeVariableNotInContext,
  SortError,
  HasFreeVariables,
  Nonduplication,
  ModeRequiresSingleAtom,
  FamilyInvariantViolation,
  NotProjections,
  LabelMismatch,
  NotAFunction,
  InvariantViolation,
  TooLarge,
  BadParams,
  NonClassicalSort,
};

const char *to_string(ErrorKind k);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace qrel
