#pragma once

#include <stdexcept>
#include <string>

namespace melnikov {

/// Input failed validation (unknown Hamiltonian, bad grid, unparseable form).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An intermediate object left the shape the theory predicts for it.
/// Seeing this means a bug or an input outside the supported family.
class ShapeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A floating point oracle could not produce a trustworthy value.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace melnikov
