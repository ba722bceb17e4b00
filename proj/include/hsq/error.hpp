#pragma once

#include <stdexcept>
#include <string>

namespace hsq {

enum class ErrorKind {
    NotPositiveDefinite,
    Singular,
    NotInAlgebra,
    BasisMismatch,
    InvalidSetup,
    MembershipViolation,
    NotInH,
    NoDescent,
    Inconclusive,
    NotClosed,
    NotNormalizing,
    NotStandard,
    ParseError,
    SchemaError,
    ValidationError,
    Usage,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hsq
