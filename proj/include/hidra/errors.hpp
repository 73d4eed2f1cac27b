#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hidra
{

enum class ErrorKind {
    DomainError,
    DegenerateTriangle,
    NotClosed,
    NotOrientable,
    InconsistentIncidence,
    NotTriangulable,
    FlipIllegal,
    NonCompactOrthocircle,
    SurgeryDiverged,
    TargetOutOfRange,
    SolverStalled,
    MaxIterations,
    FlowStalled,
    ConstructionInvalid,
    ParseError,
    ValidationError,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::NotOrientable: return "NotOrientable";
        case ErrorKind::InconsistentIncidence: return "InconsistentIncidence";
        case ErrorKind::NotTriangulable: return "NotTriangulable";
        case ErrorKind::FlipIllegal: return "FlipIllegal";
        case ErrorKind::NonCompactOrthocircle: return "NonCompactOrthocircle";
        case ErrorKind::SurgeryDiverged: return "SurgeryDiverged";
        case ErrorKind::TargetOutOfRange: return "TargetOutOfRange";
        case ErrorKind::SolverStalled: return "SolverStalled";
        case ErrorKind::MaxIterations: return "MaxIterations";
        case ErrorKind::FlowStalled: return "FlowStalled";
        case ErrorKind::ConstructionInvalid: return "ConstructionInvalid";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

/** @brief Every failure raised by the library carries one of the kinds above. */
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_{kind}
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg)
{
    throw Error(kind, msg);
}

}  // namespace hidra
