#pragma once

#include <stdexcept>
#include <string>

namespace filament {

// Domain errors: the request is well-formed but the inputs lie outside the
// model's validity region (CLI exit code 3).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A (j0,k0,l0,nu) seed whose amplitude expression is <= 0: it seeds no branch.
struct NonPositiveAmplitude : DomainError {
    using DomainError::DomainError;
};

// Traveling-wave frequency radicand <= 0 (l = 1 with a <= 1).
struct DegenerateFrequency : DomainError {
    using DomainError::DomainError;
};

// The kernel is larger than the seeded orbit: the one-dimensional reduction
// does not apply, and branch solves refuse the site.
struct ResonantAmplitude : DomainError {
    using DomainError::DomainError;
};

// Numerical failures: an iteration left its convergence regime (exit code 4).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field left the analyticity domain of the nonlinearity (sup |u| >= guard).
struct AmplitudeTooLarge : NumericalError {
    using NumericalError::NumericalError;
};

// Fixed-point iteration for the range equation diverged or stalled.
struct ContractionFailed : NumericalError {
    using NumericalError::NumericalError;
};

// Scalar root find in the distance parameter failed to converge.
struct RootNotFound : NumericalError {
    using NumericalError::NumericalError;
};

// A non-kernel lattice site inside the truncation has a zero eigenvalue;
// signals a kernel/cutoff mismatch.
struct SingularSite : NumericalError {
    using NumericalError::NumericalError;
};

// min |w1| fell below the collision guard: the almost-parallel filament
// model is no longer valid.
struct CollisionDetected : NumericalError {
    using NumericalError::NumericalError;
};

// Galerkin Newton iteration for a traveling profile failed.
struct NewtonFailed : NumericalError {
    using NumericalError::NumericalError;
};

// A time step could not be completed within tolerance.
struct StepRejected : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace filament
