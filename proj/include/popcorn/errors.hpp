#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace popcorn {

/// Precondition or domain violation (bad parameter, value outside the set's range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation would exceed the configured size budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::string predicted)
        : std::runtime_error(what + " (predicted " + predicted + ")"), predicted_(std::move(predicted)) {}

    /// Decimal rendering of the predicted size that tripped the budget.
    const std::string& predicted() const noexcept { return predicted_; }

private:
    std::string predicted_;
};

/// A runtime self-check failed (for example an admissible k that does not behave as required).
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace popcorn
