#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

enum class ErrorKind {
    InvalidArgument,
    Parse,
    Version,
    Io,
    Mismatch,
    EmptyCell,
    MissingCombination,
    Quadrature,
    NoCoincidences,
};

/// Base of every exception thrown by the library. The kind maps one-to-one
/// onto the status codes of the C interface.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what)
        : Error(ErrorKind::InvalidArgument, what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(ErrorKind::Parse, file + ":" + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(ErrorKind::Quadrature, what), achieved_(achieved) {}

    /// Error estimate reached before giving up.
    double achieved_error() const noexcept { return achieved_; }

private:
    double achieved_;
};

} // namespace bellsim
