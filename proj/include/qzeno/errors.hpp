// errors.hpp — Exception types raised by the qzeno library

#pragma once

#include <stdexcept>
#include <string>

namespace qzeno {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Quadrature budget exhausted or integrand produced NaN/Inf. Exit code 3 in the CLI.
struct QuadratureFailure : Error {
    using Error::Error;
};

struct NonConvergence : QuadratureFailure {
    using QuadratureFailure::QuadratureFailure;
};

struct NonFinite : QuadratureFailure {
    using QuadratureFailure::QuadratureFailure;
};

struct InvalidBracket : Error {
    using Error::Error;
};

struct NegativeFrequency : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// coth(omega / 2 theta omega0) has a pole at omega = 0 for theta > 0.
struct IndeterminateAtZero : Error {
    using Error::Error;
};

// |(2n+1) Delta_M - gamma_M| fell below the degeneracy guard: the Zeno ratio
// diverges and the regime is reported as AZE-divergent.
struct DegenerateDenominator : Error {
    explicit DegenerateDenominator(const std::string& what, double denominator = 0.0)
        : Error(what), denominator(denominator) {}
    double denominator;
};

struct PerturbativeBreakdown : Error {
    explicit PerturbativeBreakdown(const std::string& what, double escape = 0.0)
        : Error(what), escape_probability(escape) {}
    double escape_probability;
};

struct NegativeProbability : Error {
    using Error::Error;
};

struct TruncationLeakage : Error {
    using Error::Error;
};

struct StiffStep : Error {
    using Error::Error;
};

} // namespace qzeno
