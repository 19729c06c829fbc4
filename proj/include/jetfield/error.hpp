#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetfield {

enum class ErrorKind {
    DivisionByZero,
    MissingAssignment,
    EvalDomain,
    UnknownSymbol,
    SyntaxError,
    ArityError,
    NameCollision,
    ChartMismatch,
    BaseMismatch,
    OrderOverflow,
    SingularLagrangian,
    NonQuadratic,
    GridTooSmall,
    MissingField,
    InvalidModel,
    InvalidGrid,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the engine. The kind is stable and is what
/// tests and the CLI dispatch on; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column);
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Raised when the momentum map cannot be inverted. `directions` holds a basis
/// of the kernel of the jet Hessian, each vector written as a linear
/// combination of jet symbols.
class SingularLagrangianError : public Error {
public:
    explicit SingularLagrangianError(std::vector<std::string> directions);
    [[nodiscard]] const std::vector<std::string>& directions() const noexcept { return directions_; }

private:
    std::vector<std::string> directions_;
};

}  // namespace jetfield
