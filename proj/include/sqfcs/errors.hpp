// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace sqfcs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A constructed object or configuration violates one of its invariants.
struct ValidationError : Error {
    using Error::Error;
};

// Adaptive quadrature failed to meet its tolerance within the doubling budget.
struct QuadratureError : Error {
    using Error::Error;
};

// Richardson extrapolation of a finite-difference derivative did not settle.
struct DerivativeError : Error {
    using Error::Error;
};

// The two eigenvalues of the tilted generator coincide; only corrupted
// inputs can produce this.
struct DegenerateEigenvalueError : Error {
    using Error::Error;
};

// A scaled cumulant was requested against a vanishing reference.
struct ReferenceZeroError : Error {
    using Error::Error;
};

// A limiting-regime check was invoked outside its regime of validity.
struct RegimeError : Error {
    using Error::Error;
};

// The geometric TUR correction factor is undefined (vanishing dynamic flux).
struct UndefinedCorrectionError : Error {
    using Error::Error;
};

// Finite-time cumulant estimation received an inconsistent set of runs.
struct StencilError : Error {
    using Error::Error;
};

// Independent evaluation routes disagree beyond tolerance.
struct CrosscheckError : Error {
    using Error::Error;
};

// Configuration file problem, with the offending line when known.
struct ConfigError : ValidationError {
    ConfigError(const std::string& msg, int line_no = 0)
        : ValidationError(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
    int line;
};

}  // namespace sqfcs
