#pragma once

#include <stdexcept>
#include <string>

namespace psa {

enum class ErrorCode {
  DimensionMismatch,
  NonpositiveDelay,
  MissingZeroDelay,
  InvalidWeights,
  InvalidN,
  OutOfInterval,
  SingularMatrix,
  SingularResolvent,
  EigensolverFailure,
  RankDeficient,
  MaxIterations,
  Diverged,
  EmptyFrequencyAnomaly,
  AllStartsFailed,
  RegionTooSmall,
  EmptyPseudospectrum,
  InvalidRegion,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers what failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace psa
