#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidNumberError : public Error {
public:
    using Error::Error;
};

class SingularValueError : public Error {
public:
    using Error::Error;
};

class UnsupportedGateError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class TooLargeError : public Error {
public:
    using Error::Error;
};

class MappingInfeasibleError : public Error {
public:
    using Error::Error;
};

class UnsupportedStatementError : public Error {
public:
    using Error::Error;
};

class QasmSyntaxError : public Error {
public:
    QasmSyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace flowec
