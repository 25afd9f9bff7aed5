#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wsieve {

enum class Errc {
    GcdViolation,
    ZeroDiscriminant,
    CoefficientRange,
    DensityZero,
    ZeroFactor,
    ZeroValue,
    LimitTooLarge,
    ToleranceNotMet,
    RangeOverflow,
    OutOfRange,
    OutOfValidity,
    PoleError,
    QuadratureFailure,
    DomainError,
    SupportEmpty,
    DivisionByZero,
    BudgetExceeded,
    InfeasibleB,
    ParseError,
};

std::string_view errc_name(Errc code) noexcept;

// Budget and tolerance failures are "resource" errors (CLI exit 3); the rest
// are validation errors (CLI exit 2).
bool is_resource_error(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace wsieve
