#ifndef VEECAV_ERRORS_HPP
#define VEECAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace veecav {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its admissible range. Carries the field name.
struct RangeError : Error {
    explicit RangeError(const std::string& field_, const std::string& what_)
        : Error("RangeError: " + field_ + ": " + what_), field(field_) {}
    std::string field;
};

/// P_a >= gamma_a: the cavity gain exceeds its loss and the closed
/// spectral method has no decaying solution.
struct StabilityError : Error {
    using Error::Error;
};

/// Linear system numerically singular (condition estimate beyond 1e14).
struct SingularSystemError : Error {
    using Error::Error;
};

/// Two generator eigenvalues coincide within tolerance; the spectral
/// decomposition would need a Jordan block.
struct DegenerateSpectrumError : Error {
    using Error::Error;
};

/// Some correlation mode fails to decay (Re lambda <= 0).
struct NonDecayingError : Error {
    using Error::Error;
};

/// Channel population vanishes; the normalized spectrum is undefined.
struct ZeroPopulationError : Error {
    using Error::Error;
};

/// Spectrum does not have the three-maxima structure needed for ratios.
struct TripletNotFoundError : Error {
    using Error::Error;
};

/// Exciton dissipator rate matrix has a negative eigenvalue.
struct NonPositiveDissipatorError : Error {
    using Error::Error;
};

/// Requested Hilbert space exceeds the configured cap.
struct DimensionError : Error {
    using Error::Error;
};

/// Liouvillian null space is not one-dimensional.
struct DegenerateSteadyStateError : Error {
    using Error::Error;
};

/// Adaptive integrator could not reach the requested time.
struct StepFailureError : Error {
    using Error::Error;
};

/// Mixing angle undefined at Omega = Delta_1 = 0.
struct UndefinedAngleError : Error {
    using Error::Error;
};

/// Division by a vanishing rate sum.
struct DivisionError : Error {
    using Error::Error;
};

/// Parameter file could not be parsed.
struct ParseError : Error {
    using Error::Error;
};

/// A numerical postcondition failed (residual, positivity, ...).
struct NumericalError : Error {
    using Error::Error;
};

} // namespace veecav

#endif
