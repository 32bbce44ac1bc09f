#pragma once

#include <stdexcept>
#include <string>

namespace normgeo {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ZeroBasePoint : Error { using Error::Error; };
struct NonConvergent : Error { using Error::Error; };
struct DegenerateBody : Error { using Error::Error; };
struct UnknownPointId : Error { using Error::Error; };
struct InvalidGeodesic : Error { using Error::Error; };
struct CoincidentEndpoints : Error { using Error::Error; };
struct ParameterOutOfRange : Error { using Error::Error; };
struct SamePoint : Error { using Error::Error; };
struct SolverFailure : Error { using Error::Error; };
struct NotSeparated : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct EpsInconsistent : Error { using Error::Error; };
struct NotSmoothAtBase : Error { using Error::Error; };
struct InsufficientRepresentations : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace normgeo
