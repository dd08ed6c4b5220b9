#pragma once

#include <stdexcept>
#include <string>

namespace lusin {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a budget inequality cannot be met at the available resolution.
/// The message names the binding inequality.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::string constraint, const std::string& what)
        : std::runtime_error(what), constraint_(std::move(constraint)) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

}  // namespace lusin
