#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asympt {

/// Caller broke an operation's precondition (e.g. mixing series orders).
class contract_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of a function.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid family or phi parameters.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A valid but unsupported combination (e.g. collecting a shifted phi).
class unsupported_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few usable rows to fit a decay slope.
class insufficient_data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric oracle hit its iteration cap before reaching the requested tolerance.
/// Carries the best value found so callers can report it.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double best_value, std::size_t terms_used, double tail_bound)
        : std::runtime_error(what), best_value_(best_value), terms_used_(terms_used), tail_bound_(tail_bound) {}

    double best_value() const noexcept { return best_value_; }
    std::size_t terms_used() const noexcept { return terms_used_; }
    double tail_bound() const noexcept { return tail_bound_; }

private:
    double best_value_;
    std::size_t terms_used_;
    double tail_bound_;
};

} // namespace asympt
