#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpineq {

// Hypothesis of a theorem/check is not met by the input. Distinct from an
// inequality violation: the CLI maps this to a usage-style exit, not to the
// "counterexample found" exit.
class HypothesisError : public std::runtime_error {
public:
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative method failed to reach its termination threshold.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_ = 0.0;
};

// Malformed text input; line is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

} // namespace warpineq
