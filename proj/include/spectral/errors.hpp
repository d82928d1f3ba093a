#pragma once

#include <stdexcept>
#include <string>

namespace spectral {

/// Base class of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid user input (files, sizes, intervals, out-of-domain arguments).
/// The CLI maps this family to exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// A numerical procedure failed to meet its contract.
/// The CLI maps this family to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

struct ParseError : InputError {
    using InputError::InputError;
};
struct LoopEdge : InputError {
    explicit LoopEdge(const std::string& v) : InputError("loop edge at vertex '" + v + "'") {}
};
struct DuplicateEdge : InputError {
    DuplicateEdge(const std::string& u, const std::string& v)
        : InputError("duplicate edge {" + u + "," + v + "}") {}
};
struct Disconnected : InputError {
    explicit Disconnected(const std::string& v)
        : InputError("vertex '" + v + "' is not connected to vertex 0") {}
};
struct UnknownVertex : InputError {
    explicit UnknownVertex(const std::string& v) : InputError("unknown vertex '" + v + "'") {}
};
struct InvalidSize : InputError {
    using InputError::InputError;
};
struct OutOfRange : InputError {
    using InputError::InputError;
};
struct GraphMismatch : InputError {
    GraphMismatch() : InputError("edge waves belong to different graphs") {}
};

/// Interval endpoint too close to a spectral point to classify reliably.
struct AmbiguousBoundary : InputError {
    AmbiguousBoundary(double eigenvalue, double endpoint)
        : InputError("interval endpoint " + std::to_string(endpoint) +
                     " is too close to spectral point " + std::to_string(eigenvalue)),
          eigenvalue(eigenvalue), endpoint(endpoint) {}
    double eigenvalue, endpoint;
};

/// The band preimage of mu lands on the forbidden set (k*pi)^2.
struct SigmaCollision : InputError {
    SigmaCollision(int band, double mu)
        : InputError("preimage of mu=" + std::to_string(mu) + " in band " + std::to_string(band) +
                     " lies in the forbidden set"),
          band(band), mu(mu) {}
    int band;
    double mu;
};

/// Evaluation point z hits (or numerically grazes) the forbidden set.
struct SigmaPole : InputError {
    explicit SigmaPole(const std::string& what) : InputError(what) {}
};

struct EndpointOnSpectrum : InputError {
    explicit EndpointOnSpectrum(double endpoint)
        : InputError("interval endpoint " + std::to_string(endpoint) +
                     " violates the admissibility condition (m(endpoint) meets spec P)"),
          endpoint(endpoint) {}
    double endpoint;
};

struct ConvergenceFailure : NumericError {
    ConvergenceFailure(double tol, double achieved)
        : NumericError("eigensolver residual " + std::to_string(achieved) +
                       " exceeds tolerance " + std::to_string(tol)),
          tol(tol), achieved(achieved) {}
    double tol, achieved;
};

/// The Weyl matrix is numerically singular at z, i.e. z is next to spec H.
struct SingularWeyl : NumericError {
    explicit SingularWeyl(double inverse_norm)
        : NumericError("Weyl matrix numerically singular (|M(z)^-1| = " +
                       std::to_string(inverse_norm) + ")"),
          inverse_norm(inverse_norm) {}
    double inverse_norm;
};

struct NearSingular : NumericError {
    using NumericError::NumericError;
};

struct MultiplicityMismatch : NumericError {
    MultiplicityMismatch(double lambda, int expected, int found)
        : NumericError("multiplicity mismatch at lambda=" + std::to_string(lambda) +
                       ": expected " + std::to_string(expected) + ", oracle found " +
                       std::to_string(found)),
          lambda(lambda), expected(expected), found(found) {}
    double lambda;
    int expected, found;
};

}  // namespace spectral
