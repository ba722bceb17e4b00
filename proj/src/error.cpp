#include "hsq/error.hpp"

namespace hsq {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::Singular: return "Singular";
        case ErrorKind::NotInAlgebra: return "NotInAlgebra";
        case ErrorKind::BasisMismatch: return "BasisMismatch";
        case ErrorKind::InvalidSetup: return "InvalidSetup";
        case ErrorKind::MembershipViolation: return "MembershipViolation";
        case ErrorKind::NotInH: return "NotInH";
        case ErrorKind::NoDescent: return "NoDescent";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::NotNormalizing: return "NotNormalizing";
        case ErrorKind::NotStandard: return "NotStandard";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::Usage: return "Usage";
    }
    return "Error";
}

}  // namespace hsq
