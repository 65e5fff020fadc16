#pragma once

#include <stdexcept>
#include <string>

namespace qcert {

// Base class for all qcert errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input breaks a structural invariant (non-Hermitian, trace far from 1, not
// PSD, unnormalized amplitudes, inconsistent bundle layouts).
struct ValidationError : Error { using Error::Error; };

// Region indices out of range, duplicated, or overlapping where disjointness
// is required.
struct RegionError : Error { using Error::Error; };

// Operands whose layouts must match do not.
struct ShapeError : Error { using Error::Error; };

// Composite dimension exceeds the configured maximum.
struct CapacityError : Error { using Error::Error; };

// Scalar argument outside its mathematical domain.
struct DomainError : Error { using Error::Error; };

// Marginals that must agree differ beyond tolerance.
struct ConsistencyError : Error { using Error::Error; };

// A required reduced density matrix is missing from a bundle.
struct CoverageError : Error { using Error::Error; };

// A shield plan violates its ordering constraints or does not fit the layout.
struct PlanError : Error { using Error::Error; };

// Grid geometry cannot accommodate the request.
struct GeometryError : Error { using Error::Error; };

// Measurement scheme incompatible with the region (e.g. non-qubit sites under
// the Pauli scheme).
struct SchemeError : Error { using Error::Error; };

// Input is singular or zero where nontrivial support is required.
struct DegenerateError : Error { using Error::Error; };

// An iterative or recursive procedure failed to stay within its tolerance.
struct NonConvergenceError : Error { using Error::Error; };

// Malformed input file.
struct ParseError : Error { using Error::Error; };

}  // namespace qcert
