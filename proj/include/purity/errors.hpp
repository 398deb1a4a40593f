#pragma once

#include <stdexcept>
#include <string>

namespace purity {

// Input that parsed correctly but violates a mathematical precondition
// (non-unit trace, negative eigenvalue, non-stochastic channel row, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text: wrong token count, unreadable number, bad dimension.
// Carries the 1-based line number where parsing failed (0 if unknown).
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_ = 0;
};

// A computation was refused because it would exceed a resource guard
// (e.g. exhaustive channel enumeration past the candidate budget).
class GuardError : public std::runtime_error {
public:
    explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace purity
