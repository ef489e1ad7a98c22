#pragma once

#include <stdexcept>
#include <string>

namespace tdho {

// Base for every error raised by the library. The CLI maps subclasses to
// distinct exit statuses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition on a physical input violated (non-positive frequency, zero
// slope, time outside a sampled profile, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// |chi| or |alpha| reached the unit circle beyond the rounding guard.
class SaturationError : public Error {
public:
    using Error::Error;
};

// A denominator of the SU(1,1) composition vanished.
class SingularCompositionError : public Error {
public:
    using Error::Error;
};

// 1 - chi * a_j vanished inside the recurrence.
class StepSingularityError : public Error {
public:
    using Error::Error;
};

// A NaN or infinity showed up in a trajectory record.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Post-transition window too short for summary statistics.
class InsufficientWindowError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Malformed command line or configuration file.
class UsageError : public Error {
public:
    using Error::Error;
};

// Fit data cannot constrain the ansatz parameters.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

} // namespace tdho
