#include "singlab/errors.hpp"

namespace singlab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotSorted: return "NotSorted";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::NonPositiveEntry: return "NonPositiveEntry";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::GradeOutOfRange: return "GradeOutOfRange";
    case Errc::NumericalInstability: return "NumericalInstability";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::RadiusOverflow: return "RadiusOverflow";
    case Errc::BadSymbol: return "BadSymbol";
    case Errc::ROutOfXi: return "ROutOfXi";
    case Errc::BoxTooLarge: return "BoxTooLarge";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::InvalidWitness: return "InvalidWitness";
    case Errc::InsufficientMass: return "InsufficientMass";
    case Errc::RhoOutOfRange: return "RhoOutOfRange";
    case Errc::InfeasibleZeta: return "InfeasibleZeta";
    case Errc::AlphaNonPositive: return "AlphaNonPositive";
    case Errc::TTooSmall: return "TTooSmall";
    case Errc::InfeasibleProfile: return "InfeasibleProfile";
    case Errc::NegativeOmega: return "NegativeOmega";
    case Errc::POutOfRange: return "POutOfRange";
    case Errc::GammaOutOfRange: return "GammaOutOfRange";
    case Errc::DegenerateCounts: return "DegenerateCounts";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Overflow: return "Overflow";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

bool Error::is_budget() const {
  switch (code_) {
    case Errc::BoxTooLarge:
    case Errc::RadiusOverflow:
    case Errc::BudgetExceeded:
      return true;
    default:
      return false;
  }
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace singlab
