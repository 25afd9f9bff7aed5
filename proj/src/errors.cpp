#include "wsieve/errors.hpp"

namespace wsieve {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::GcdViolation: return "GcdViolation";
        case Errc::ZeroDiscriminant: return "ZeroDiscriminant";
        case Errc::CoefficientRange: return "CoefficientRange";
        case Errc::DensityZero: return "DensityZero";
        case Errc::ZeroFactor: return "ZeroFactor";
        case Errc::ZeroValue: return "ZeroValue";
        case Errc::LimitTooLarge: return "LimitTooLarge";
        case Errc::ToleranceNotMet: return "ToleranceNotMet";
        case Errc::RangeOverflow: return "RangeOverflow";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::OutOfValidity: return "OutOfValidity";
        case Errc::PoleError: return "PoleError";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::DomainError: return "DomainError";
        case Errc::SupportEmpty: return "SupportEmpty";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::InfeasibleB: return "InfeasibleB";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_resource_error(Errc code) noexcept {
    switch (code) {
        case Errc::BudgetExceeded:
        case Errc::ToleranceNotMet:
        case Errc::QuadratureFailure:
        case Errc::RangeOverflow:
        case Errc::LimitTooLarge:
            return true;
        default:
            return false;
    }
}

}  // namespace wsieve
