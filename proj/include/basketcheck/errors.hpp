#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace basketcheck {

struct SourcePos {
    int line = 0;  // 1-based; 0 means "no position"
    int col = 0;

    bool valid() const { return line > 0; }
};

// Prefixes msg with "line:col: " when pos is valid.
std::string format_message(const std::string& msg, SourcePos pos);

class Error : public std::runtime_error {
public:
    Error(const std::string& msg, SourcePos pos = {})
        : std::runtime_error(format_message(msg, pos)), pos_(pos) {}

    SourcePos pos() const { return pos_; }

private:
    SourcePos pos_;
};

// Lexical or syntax error, including duplicate declarations.
class ParseError : public Error {
    using Error::Error;
};

// Unbound identifier, type mismatch, division by zero, non-integer result.
class EvalError : public Error {
    using Error::Error;
};

// Property identifier does not resolve against the model's state space.
class BindError : public Error {
    using Error::Error;
};

// Elaboration failure: overlapping guards, deadlock, bad branch probabilities,
// update leaving the declared range.
class BuildError : public Error {
    using Error::Error;
};

// Model-core operation misuse (bad valuation, filter matching no states, ...).
class ModelError : public Error {
    using Error::Error;
};

// Iterative solver exhausted max_iterations before reaching epsilon.
class SolveError : public Error {
public:
    SolveError(const std::string& msg, std::size_t iterations, double residual)
        : Error(msg), iterations(iterations), residual(residual) {}

    std::size_t iterations;
    double residual;
};

}  // namespace basketcheck
