#pragma once

#include <stdexcept>
#include <string>

namespace vcsd {

// Bad arguments or contract violations by the caller.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent or incomplete input data (missing scenario entries, bad routes, ...).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed files; carries a line number when known.
struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& msg, int line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vcsd
