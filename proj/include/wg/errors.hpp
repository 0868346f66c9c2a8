#pragma once

#include <stdexcept>
#include <string>

namespace wg {

/// Argument outside the mathematical domain of an operation (composite where a
/// prime is required, non-squarefree modulus, b outside 12..35, ...).
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// Size parameter above what the implementation supports.
struct bounds_error : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// Work or memory budget exceeded (enumeration or oscillation limits).
struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance.
struct quadrature_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold did not; always a bug.
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace wg
