#include "jetfield/error.hpp"

namespace jetfield {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::MissingAssignment: return "MissingAssignment";
        case ErrorKind::EvalDomain: return "EvalDomain";
        case ErrorKind::UnknownSymbol: return "UnknownSymbol";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::ArityError: return "ArityError";
        case ErrorKind::NameCollision: return "NameCollision";
        case ErrorKind::ChartMismatch: return "ChartMismatch";
        case ErrorKind::BaseMismatch: return "BaseMismatch";
        case ErrorKind::OrderOverflow: return "OrderOverflow";
        case ErrorKind::SingularLagrangian: return "SingularLagrangian";
        case ErrorKind::NonQuadratic: return "NonQuadratic";
        case ErrorKind::GridTooSmall: return "GridTooSmall";
        case ErrorKind::MissingField: return "MissingField";
        case ErrorKind::InvalidModel: return "InvalidModel";
        case ErrorKind::InvalidGrid: return "InvalidGrid";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

SyntaxError::SyntaxError(const std::string& message, int line, int column)
    : Error(ErrorKind::SyntaxError,
            message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column)
{
}

namespace {
std::string join_directions(const std::vector<std::string>& d)
{
    std::string out = "momentum map is not invertible; degenerate directions:";
    for (const auto& s : d) out += " [" + s + "]";
    return out;
}
}  // namespace

SingularLagrangianError::SingularLagrangianError(std::vector<std::string> directions)
    : Error(ErrorKind::SingularLagrangian, join_directions(directions)), directions_(std::move(directions))
{
}

}  // namespace jetfield
