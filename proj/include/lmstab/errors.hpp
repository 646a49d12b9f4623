#pragma once

#include <stdexcept>
#include <string>

namespace lmstab {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (pts files, JSON configs). Carries a line number when known.
struct ParseError : Error {
    explicit ParseError(const std::string& msg, int line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_number(line) {}
    int line_number;
};

// Structurally valid input that violates a contract (mismatched lengths,
// degenerate geometry, missing files).
struct DataError : Error {
    using Error::Error;
};

}  // namespace lmstab
