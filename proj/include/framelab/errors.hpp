#pragma once

#include <stdexcept>
#include <string>

namespace framelab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroColumnError : Error { using Error::Error; };
struct NotNormalizedError : Error { using Error::Error; };
struct BadDimsError : Error { using Error::Error; };
struct BadParameterError : Error { using Error::Error; };
struct DimMismatchError : Error { using Error::Error; };
struct EmptyPatternError : Error { using Error::Error; };
struct RankDeficientError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct ZeroKernelError : Error { using Error::Error; };

}  // namespace framelab
