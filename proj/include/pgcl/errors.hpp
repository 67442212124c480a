#pragma once

#include <stdexcept>
#include <string>

namespace pgcl {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error with a source position (1-based line and column).
struct ParseError : Error {
    ParseError(int line_, int col_, const std::string& msg)
        : Error("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
    int line;
    int col;
};

/// Evaluation-time violation: probability out of range, assignment outside a
/// variable's domain, empty demonic set, mismatched state spaces.
struct SemanticError : Error {
    explicit SemanticError(const std::string& msg) : Error(msg) {}
};

/// Operation requested on an input it does not support (e.g. exact refinement
/// of a program containing loops).
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

}  // namespace pgcl
