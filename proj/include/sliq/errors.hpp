#pragma once

#include <stdexcept>
#include <string>

namespace sliq {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Temporary impact f(a) <= 0 at an evaluation point.
struct NonPositiveTemporaryImpact : Error {
    using Error::Error;
};

// The denominator of zeta (kappa - g0/2 - sqrt(phi*f0)) vanishes.
struct DegenerateZeta : Error {
    using Error::Error;
};

// 1 - zeta*exp(2*gamma*(T-t)) has a root inside the horizon.
struct SingularDenominator : Error {
    SingularDenominator(const std::string& msg, double t_sing)
        : Error(msg), t_singular(t_sing) {}
    double t_singular;
};

// Operation not defined for the given kind/regime.
struct NotApplicable : Error {
    using Error::Error;
};

// Limiting-regime formula evaluated at t = T.
struct HorizonBoundary : Error {
    using Error::Error;
};

// Time arguments out of order (s < t).
struct OrderViolation : Error {
    using Error::Error;
};

struct InvalidInitialState : Error {
    using Error::Error;
};

// Adaptive quadrature exceeded its refinement budget.
struct NonConvergence : Error {
    using Error::Error;
};

// Finite-difference residual no longer decreases under refinement.
struct StepTooSmall : Error {
    using Error::Error;
};

// |rho| = 1 makes the Gaussian covariance singular.
struct SingularCovariance : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg), line(line_), col(col_) {}
    int line = 0;
    int col = 0;
};

struct ValidationError : Error {
    ValidationError(const std::string& field_, const std::string& msg)
        : Error(msg), field(field_) {}
    std::string field;
};

}  // namespace sliq
