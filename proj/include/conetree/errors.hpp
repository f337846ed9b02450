#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conetree {

/// Bad parameters supplied by the caller (out-of-range labels, K < 1, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The requested quantity is not defined at this point of parameter space,
/// e.g. a boundary Green's function outside the a.c. set.
class DomainRejection : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed: singular solve, fixed point not reached.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericFailure {
public:
    NonConvergence(std::size_t iterations, double residual)
        : NumericFailure("fixed-point iteration did not converge after " +
                         std::to_string(iterations) + " iterations (last change " +
                         std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

}  // namespace conetree
