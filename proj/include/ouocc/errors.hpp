#pragma once

#include <stdexcept>
#include <string>

namespace ouocc {

/// Raised when an analytic evaluation is requested with 2*lambda*T >= 37,
/// where exp(-2*lambda*T) is lost below double precision.
class PrecisionGuardError : public std::domain_error {
public:
    explicit PrecisionGuardError(const std::string& what)
        : std::domain_error("precision guard: " + what) {}
};

// Argument validation failures throw std::invalid_argument.

}  // namespace ouocc
