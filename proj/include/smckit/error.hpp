/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_ERROR_HPP
#define SMCKIT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smckit {

enum class ErrorKind {
    MissingNextState,
    BitOutOfRange,
    SyntaxError,
    UndeclaredVariable,
    NextInInit,
    WidthMismatch,
    IndexOutOfWindow,
    ResourceLimit,
    MalformedSolverOutput,
    NonClausalProperty,
    WidthTooLarge,
    CertificateParseError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string & message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Diagnostic tied to a position in an input document (1-based line and column).
class ParseError : public Error {
public:
    ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string & message)
        : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace smckit

#endif // SMCKIT_ERROR_HPP
