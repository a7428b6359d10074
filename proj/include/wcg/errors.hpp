#pragma once

#include <stdexcept>
#include <string>

namespace wcg {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A player, resource, or strategy id that does not exist in the instance.
struct InvalidReferenceError : Error {
    using Error::Error;
};

// An argument outside its mathematical domain (negative x, gamma out of range, ...).
struct DomainError : Error {
    using Error::Error;
};

// A call-site contract was not met (player not in the set, alpha < 1, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// Enumeration work would exceed the configured cap.
struct CapacityError : Error {
    using Error::Error;
};

// Malformed instance or network document. line is 1-based, 0 if unknown.
struct ParseError : Error {
    ParseError(int lineNumber, const std::string& what)
        : Error(lineNumber > 0 ? "line " + std::to_string(lineNumber) + ": " + what : what),
          line(lineNumber) {}
    int line;
};

// A generator cannot satisfy the requested parameters.
struct GeneratorError : Error {
    using Error::Error;
};

// A network player has no source-to-target path.
struct InfeasiblePlayerError : Error {
    using Error::Error;
};

// A numeric search failed to converge.
struct NumericError : Error {
    using Error::Error;
};

// A property the library guarantees was observed to fail. Seeing this is a bug.
struct InvariantViolationError : Error {
    using Error::Error;
};

}  // namespace wcg
