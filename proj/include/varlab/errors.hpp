#pragma once

#include <stdexcept>
#include <string>

namespace varlab {

// Base class for numerical and domain failures raised by the library.
// I/O problems use IoError instead so callers can map them to distinct
// exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyInputError : Error {
    EmptyInputError() : Error("empty input: no data points") {}
};

struct InsufficientDataError : Error {
    InsufficientDataError()
        : Error("insufficient data: variance needs at least 2 points") {}
};

struct NonFiniteValueError : Error {
    explicit NonFiniteValueError(double x)
        : Error("non-finite value rejected at ingestion: " + std::to_string(x)) {}
};

struct NegativeVarianceError : Error {
    explicit NegativeVarianceError(double v)
        : Error("negative variance (" + std::to_string(v) +
                "): upstream cancellation, refusing to continue") {}
};

struct ZeroMeanError : Error {
    ZeroMeanError() : Error("coefficient of variation undefined for zero mean") {}
};

struct DomainError : Error {
    using Error::Error;
};

struct UnsupportedParallelAlgorithmError : Error {
    explicit UnsupportedParallelAlgorithmError(const std::string& name)
        : Error(name + " incorporates one point at a time and cannot run multi-threaded") {}
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace varlab
