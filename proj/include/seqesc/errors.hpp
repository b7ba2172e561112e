#pragma once

#include <stdexcept>
#include <string>

namespace seqesc {

/// Argument outside the mathematical domain of an operation (R <= 0, alpha < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical method refused or failed: overflow risk, resonance, non-bracketed root.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Stochastic or deterministic integration left the admissible state space.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace seqesc
