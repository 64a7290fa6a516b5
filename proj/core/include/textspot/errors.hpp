#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textspot {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition (shape mismatch, bad label, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// Geometric input is degenerate (zero-extent rect, <3 vertices, zero area).
class GeometryError : public Error {
public:
    using Error::Error;
};

// Invalid module configuration (unknown anchor stage, bad thresholds).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A serialized byte stream does not conform to its format.
// `offset` is the byte position at which the problem was detected.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Reading or writing an external byte sink/source failed.
class IoError : public Error {
public:
    using Error::Error;
};

// A structured document failed to parse or validate.
class ParseError : public Error {
public:
    using Error::Error;
};

// A pipeline stage failed at runtime (e.g. map provider could not supply a
// stack for a surviving proposal).
class PipelineError : public Error {
public:
    using Error::Error;
};

// Scene synthesis could not place objects within the retry budget.
class PlacementError : public Error {
public:
    using Error::Error;
};

} // namespace textspot
