#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phibvp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the expression parser and the config reader; carries the
/// byte offset of the offending token within the parsed text.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg), offset_(offset) {}

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Domain failure while evaluating an expression (division by zero,
/// log/sqrt of a negative, non-finite operand or result).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Numerical failure outside expression evaluation: bracket expansion
/// blow-up, quadrature over a non-finite integrand, diverging searches.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Filesystem / stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace phibvp
