#pragma once

#include <stdexcept>
#include <string>

namespace tabint {

// Syntax-level rejection of an input file. Carries a 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col) {
        return "parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
    }
    int line_;
    int col_;
};

// A precondition of the domain/engine contract was violated by the caller.
// These indicate wiring bugs (e.g. mismatched variable sets) and are never
// recoverable within a run.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

// A configured resource limit (step budget, sharing-closure width,
// iteration budget) was exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tabint
