#pragma once

#include <stdexcept>
#include <string>

namespace ukcm {

// Search or enumeration budget exhausted; CLI maps this to exit code 3.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& w) : std::runtime_error(w) {}
};

// Malformed input text; carries the offending line number.
struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// Internal contract violated; CLI maps this to exit code 4.
struct InvariantError : std::logic_error {
    explicit InvariantError(const std::string& w) : std::logic_error(w) {}
};

}  // namespace ukcm
