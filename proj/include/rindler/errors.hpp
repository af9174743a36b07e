#pragma once

#include <stdexcept>
#include <string>

namespace rindler {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical/domain input (bad index, space mismatch, nonpositive xi, ...).
struct DomainError : Error {
    using Error::Error;
};

// Rejected configuration: dimension caps, malformed config files, missing keys.
struct ConfigError : Error {
    using Error::Error;
};

// Integration accuracy violated (norm drift past tolerance, undersampled grids).
struct AccuracyError : Error {
    using Error::Error;
};

// Filesystem trouble while reading/writing artifacts.
struct IoError : Error {
    using Error::Error;
};

} // namespace rindler
