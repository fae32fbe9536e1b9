#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace capeig {

enum class ErrorKind {
    NotPositiveDefinite,
    NoConvergence,
    QuadratureNotConverged,
    ModeCapTooSmall,
    ModeMonotonicityViolation,
    MonotonicityViolation,
    DomainError,
    FamilyMismatch,
    DiscriminantNegative,
    BracketFailure,
    GuardViolation,
    OracleMismatch,
    InvalidConfig,
    SchemaError,
    IoError,
};

constexpr std::string_view error_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::ModeCapTooSmall: return "ModeCapTooSmall";
    case ErrorKind::ModeMonotonicityViolation: return "ModeMonotonicityViolation";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::DiscriminantNegative: return "DiscriminantNegative";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::GuardViolation: return "GuardViolation";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Numerical failures (as opposed to bad input) map to their own CLI exit code.
constexpr bool is_numerical(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::NoConvergence:
    case ErrorKind::QuadratureNotConverged:
    case ErrorKind::ModeCapTooSmall:
    case ErrorKind::ModeMonotonicityViolation:
    case ErrorKind::MonotonicityViolation:
    case ErrorKind::DiscriminantNegative:
    case ErrorKind::BracketFailure:
    case ErrorKind::OracleMismatch:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

} // namespace capeig
