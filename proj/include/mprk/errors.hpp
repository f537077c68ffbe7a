#pragma once

#include <stdexcept>
#include <string>

namespace mprk {

/// A state or parameter left the admissible domain (nonpositive state,
/// alpha < 1/2, nonpositive step size, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Gaussian elimination met a pivot below the singularity threshold.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A block required by the Jacobian assembly could not be inverted.
class AssemblyError : public std::runtime_error {
public:
    AssemblyError(std::string block, const std::string& what)
        : std::runtime_error(what), block_(std::move(block)) {}

    const std::string& block() const noexcept { return block_; }

private:
    std::string block_;
};

/// The matrix is outside the class handled by the closed-form eigen solver.
class UnsupportedMatrixError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The local convergence probe diverged.
class ProbeFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mprk
