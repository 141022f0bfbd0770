#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rlogkg {

/// Invalid argument: mismatched lengths, bad grid parameters, non-finite input.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of a function (e.g. epsilon <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A time step produced a non-finite value.
class OverflowError : public std::overflow_error {
public:
    OverflowError(std::size_t step, double time)
        : std::overflow_error("non-finite value at step " + std::to_string(step) +
                              " (t = " + std::to_string(time) + ")"),
          step_(step), time_(time) {}

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// Failure inside a linear solver. Not expected for the systems built here.
class InternalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rlogkg
