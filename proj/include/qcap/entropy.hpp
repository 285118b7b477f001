#pragma once

#include "qcap/states.hpp"

namespace qcap::core {

// Binary entropy in bits; returns 0 at the endpoints.
double binary_entropy(double x);

// Von Neumann entropy in bits: -Σ λ log2 λ over the spectrum. Eigenvalues
// below 1e-12 contribute zero; an eigenvalue below -1e-9 is an invariant
// failure and throws ValidationError. Dimensions 1 and 2 use closed forms.
double von_neumann_entropy(const Matrix& rho);

inline double von_neumann_entropy(const DensityOperator& rho) {
  return von_neumann_entropy(rho.matrix);
}

}  // namespace qcap::core
