#pragma once

#include <stdexcept>
#include <string>

namespace coalesce {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed edge-list input; carries the offending line number.
struct ParseError : Error {
    ParseError(long long line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    long long line;
};

/// The input graph (or a generated candidate) is not connected.
struct DisconnectedError : Error {
    using Error::Error;
};

/// Invalid generator or process parameters.
struct ParamError : Error {
    using Error::Error;
};

/// A periodic chain was given to an operation that needs an aperiodic one.
struct PeriodicChainError : Error {
    using Error::Error;
};

/// Requested state space exceeds the configured cap.
struct StateCapError : Error {
    using Error::Error;
};

/// The process has a closed class that never absorbs, so the expected
/// absorption time is infinite/undefined.
struct NeverAbsorbsError : Error {
    using Error::Error;
};

/// Chain fails a structural requirement (stochasticity, reversibility, ...).
struct ChainError : Error {
    using Error::Error;
};

}  // namespace coalesce
