#pragma once

#include <stdexcept>
#include <string>

namespace singlab {

enum class Errc {
  NotSorted,
  NotNormalized,
  NonPositiveEntry,
  LengthMismatch,
  IndexOutOfRange,
  DimensionMismatch,
  GradeOutOfRange,
  NumericalInstability,
  RankDeficient,
  NotPrimitive,
  RadiusOverflow,
  BadSymbol,
  ROutOfXi,
  BoxTooLarge,
  GridMismatch,
  InvalidWitness,
  InsufficientMass,
  RhoOutOfRange,
  InfeasibleZeta,
  AlphaNonPositive,
  TTooSmall,
  InfeasibleProfile,
  NegativeOmega,
  POutOfRange,
  GammaOutOfRange,
  DegenerateCounts,
  BudgetExceeded,
  Overflow,
  ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }
  // Budget-class failures map to CLI exit 3, everything else to exit 2.
  bool is_budget() const;

private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace singlab
