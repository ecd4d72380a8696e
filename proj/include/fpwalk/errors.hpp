#pragma once

#include <stdexcept>
#include <string>

namespace fpwalk {

// Base class for all library failures so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input description rejected before any numerics ran.
struct ValidationError : Error {
    using Error::Error;
};

// Text input could not be parsed; position is 1-based.
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& what, int line_, int column_)
        : Error("parse error at line " + std::to_string(line_) + ", column " +
                std::to_string(column_) + ": " + what),
          line(line_), column(column_) {}
};

// (I - z P) was numerically singular at the requested evaluation point.
struct SingularResolvent : Error {
    double z = 0.0;
    SingularResolvent(int factor, double z_)
        : Error("resolvent of factor " + std::to_string(factor) +
                " is singular at z = " + std::to_string(z_)),
          z(z_) {}
};

// Fixed-point or power iteration failed to reach its tolerance.
struct NoConvergence : Error {
    long iterations = 0;
    double last_residual = 0.0;
    NoConvergence(const std::string& what, long iterations_, double last_residual_)
        : Error(what + " (iterations=" + std::to_string(iterations_) +
                ", last residual=" + std::to_string(last_residual_) + ")"),
          iterations(iterations_), last_residual(last_residual_) {}
};

// Implicit-function linear system was not solvable.
struct SingularJacobian : Error {
    using Error::Error;
};

// The walk could not be certified transient: the weight system has no
// solution just beyond the unit disc.
struct TransienceGateFailed : Error {
    using Error::Error;
};

// A vector that must be stationary for a kernel failed its residual check.
struct StationarityResidual : Error {
    double residual = 0.0;
    StationarityResidual(const std::string& what, double residual_)
        : Error(what + " (residual=" + std::to_string(residual_) + ")"),
          residual(residual_) {}
};

// A word violated the alternating-letter form.
struct MalformedWord : Error {
    using Error::Error;
};

// Denominator of an analytic ratio was too close to zero to trust.
struct DivisionNearZero : Error {
    double denominator = 0.0;
    DivisionNearZero(const std::string& what, double denominator_)
        : Error(what + " (denominator=" + std::to_string(denominator_) + ")"),
          denominator(denominator_) {}
};

// A truncated series could not be certified to the requested tolerance.
struct TailBoundTooLoose : Error {
    double requested = 0.0;
    double achieved = 0.0;
    TailBoundTooLoose(const std::string& what, double requested_, double achieved_)
        : Error(what + " (requested=" + std::to_string(requested_) +
                ", achieved=" + std::to_string(achieved_) + ")"),
          requested(requested_), achieved(achieved_) {}
};

// Exact enumeration grew beyond the configured safety limit.
struct StateSpaceExplosion : Error {
    std::size_t count = 0;
    explicit StateSpaceExplosion(std::size_t count_)
        : Error("exact enumeration exceeded " + std::to_string(count_) + " states"),
          count(count_) {}
};

}  // namespace fpwalk
