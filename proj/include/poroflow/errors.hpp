#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poroflow {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grid shapes incompatible with an operation (too small, mismatched, ...).
struct DimensionError : Error {
    using Error::Error;
};

/// Invalid configuration value (even kernel size, bad method tag, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Non-finite value produced by a numerical scheme. Carries the first
/// offending pixel.
struct NumericError : Error {
    NumericError(const std::string& what, std::size_t row, std::size_t col)
        : Error(what + " at pixel (" + std::to_string(row) + ", " +
                std::to_string(col) + ")"),
          row(row),
          col(col) {}
    std::size_t row = 0;
    std::size_t col = 0;
};

/// Malformed grid file. byte_offset points at the first bad byte.
struct FormatError : Error {
    FormatError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset(byte_offset) {}
    std::size_t byte_offset = 0;
};

}  // namespace poroflow
