#pragma once

#include <stdexcept>
#include <string>

namespace papeq {

// Error taxonomy. Each class maps to one failure mode of the numerical
// machinery; the CLI maps a subset to distinct exit codes.

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An eigenvalue sits inside the resolvent sector S_{theta,omega}.
struct SpectrumInSector : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectrum touches the imaginary axis (no exponential dichotomy).
struct NotHyperbolic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fractional-power norms need min |lambda| > 0.
struct ZeroGap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature exceeded its evaluation budget.
struct QuadratureFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Translation-number scan ran out of candidates within the hinted range.
struct SearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A grid function cannot supply integrand values after delay shift and
// truncation under the `error` tail policy.
struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Theta >= 1: the fixed-point theorem hypothesis fails, solve refused.
struct ThetaNotContractive : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaxIterExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace papeq
