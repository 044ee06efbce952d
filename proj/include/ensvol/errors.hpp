#pragma once

#include <stdexcept>
#include <string>

namespace ensvol {

// Input failed a documented invariant (bad dimensions, non-Hermitian
// matrix, probabilities that do not sum to one, ...).  The message names
// the violated check.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed (eigensolver did not converge, covariance
// lost positive definiteness mid-integration, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// The operation is not defined for this ensemble kind (e.g. mixtures of
// Gaussians).
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ensvol
