#pragma once

#include <stdexcept>
#include <string>

namespace defc {

enum class ErrorKind {
  DegreeBound,
  NotCertified,
  PassesThroughPoint,
  UnderResolved,
  WindingNotOne,
  ZeroAttained,
  NotInjective,
  NotComposable,
  NotInvertible,
  NewtonDivergence,
  TruncationOverflow,
  FlowExit,
  ErrorEstimate,
  NoConvergence,
  NotSimple,
  Monotonicity,
  BranchWinding,
  Degenerate,
  OutOfRange,
  Schema,
  UnknownSuite,
  Io,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace defc
