#pragma once

#include <stdexcept>

namespace flopforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: bad kernel dimensionality, inconsistent lens, ...
struct ConfigError : Error {
    using Error::Error;
};

// Malformed data: image headers, CSV rows, odd Bayer dimensions, ...
struct FormatError : Error {
    using Error::Error;
};

// Timing problems, e.g. a non-positive elapsed time.
struct MeasurementError : Error {
    using Error::Error;
};

// Unknown or misbehaving compute backend.
struct BackendError : Error {
    using Error::Error;
};

// Statistics over an empty series.
struct StatisticsError : Error {
    using Error::Error;
};

// Missing files, empty logs, non-positive power inputs.
struct InputError : Error {
    using Error::Error;
};

} // namespace flopforge
