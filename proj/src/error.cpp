#include "qsl/error.hpp"

namespace qsl {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::DimensionOverflow: return "DimensionOverflow";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotUnbiased: return "NotUnbiased";
    case Errc::NotQutrit: return "NotQutrit";
    case Errc::BadKind: return "BadKind";
    case Errc::NotDensityMatrix: return "NotDensityMatrix";
    case Errc::NotQubit: return "NotQubit";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::ZeroBlochVector: return "ZeroBlochVector";
    case Errc::ParallelVectors: return "ParallelVectors";
    case Errc::MaximallyMixedInput: return "MaximallyMixedInput";
    case Errc::TimeOutOfRange: return "TimeOutOfRange";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NotDiagonalUnitary: return "NotDiagonalUnitary";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::DimTooLarge: return "DimTooLarge";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qsl
