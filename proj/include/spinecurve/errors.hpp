#pragma once

#include <stdexcept>
#include <string>

namespace spinecurve {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry / landmark validation
struct CoincidentPoints : Error { using Error::Error; };
struct SteepEndplate : Error { using Error::Error; };
struct CoincidentCenters : Error { using Error::Error; };
struct SpineValidation : Error { using Error::Error; };

// Parsing
struct ParseError : Error { using Error::Error; };
struct MissingColumns : Error { using Error::Error; };

// Numerics
struct NonFiniteInput : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };

// Metrics / statistics
struct EmptySet : Error { using Error::Error; };
struct NoGtCurves : Error { using Error::Error; };
struct NoPredCurves : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ConstantSeries : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyIntersection : Error { using Error::Error; };

// Synthetic generation
struct InfeasibleSpec : Error { using Error::Error; };

} // namespace spinecurve
