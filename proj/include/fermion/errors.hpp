#pragma once

#include <stdexcept>
#include <string>

namespace fermion {

// Mismatched generator counts or scalar modes between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An even-only operation received odd-degree terms, or vice versa.
struct ParityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation requires an orthonormal oriented basis (q = identity).
struct BasisError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A validated geometric object (projection, complex structure, rotation,
// tangent vector) failed its defining constraints beyond tolerance.
struct ConstraintError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A transport step was too coarse to track a continuous branch.
struct RefinementError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact rational arithmetic left the int64 range.
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fermion
