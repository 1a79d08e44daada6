#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsl {

enum class Errc {
  NotHermitian,
  NoConvergence,
  NotUnitary,
  DimensionOverflow,
  DimMismatch,
  NotUnbiased,
  NotQutrit,
  BadKind,
  NotDensityMatrix,
  NotQubit,
  NotNormalized,
  ZeroBlochVector,
  ParallelVectors,
  MaximallyMixedInput,
  TimeOutOfRange,
  BadDimension,
  NotDiagonalUnitary,
  ZeroDenominator,
  DimTooLarge,
  InvalidArgument,
};

std::string_view errc_name(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qsl
