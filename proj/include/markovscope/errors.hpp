#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace markovscope {

// Failure taxonomy shared by the whole library. The CLI maps these onto its
// exit-code contract: 2 parse, 3 validation, 4 I/O.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Incompatible dimensions (factor lists, operator sizes, channel spaces).
class ShapeError : public Error {
public:
    using Error::Error;
};

// Input outside an operation's mathematical domain (non-Hermitian, negative
// eigenvalue where PSD is required, trace far from one, n = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested object exceeds configured size limits.
class CapacityError : public Error {
public:
    using Error::Error;
};

// A numerical routine failed to converge or produced non-finite values.
class NumericError : public Error {
public:
    using Error::Error;
};

// A well-formed input violates a documented invariant (not a density matrix,
// block weights do not sum to one, bad dimension list, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed input text. Carries the 1-based position when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

// Filesystem failures (unreadable input, unwritable output path).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace markovscope
