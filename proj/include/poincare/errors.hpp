#pragma once

#include <stdexcept>
#include <string>

namespace poincare {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeMass : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct EmptySupport : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct DividedByZeroMass : Error { using Error::Error; };
struct DegreeTooSmall : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ZeroDirichlet : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DegenerateSupport : Error { using Error::Error; };
struct BadDecomposition : Error { using Error::Error; };
struct NegativeDiscriminant : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct UnknownCase : Error { using Error::Error; };

} // namespace poincare
