#pragma once

#include <string>
#include <vector>

#include "qcap/linalg.hpp"
#include "qcap/rng.hpp"

namespace qcap::core {

// Ordered tensor factorization of a Hilbert space. The first factor owns the
// slowest-varying index (so B⊗E means B is the slow index).
struct DimensionSplit {
  std::vector<int> factors;
  std::vector<std::string> labels;

  int total() const;
  // Checks the product of factors against an operator dimension.
  void require_total(int dim) const;

  static DimensionSplit bipartite(int a, int b, const std::string& label_a = "A",
                                  const std::string& label_b = "B");
};

struct DensityOperator {
  int dim = 0;
  Matrix matrix;
};

struct PureState {
  int dim = 0;
  Vector amplitudes;
};

// Validating constructors. make_density enforces Hermiticity (1e-9), unit
// trace (1e-9) and minimum eigenvalue >= -1e-9; make_pure enforces unit norm.
DensityOperator make_density(const Matrix& m);
PureState make_pure(const Vector& v);

// Wraps a matrix that is valid by construction (channel outputs, projectors
// of normalized states, ...) without re-running the eigenvalue check.
DensityOperator density_unchecked(const Matrix& m);

DensityOperator projector(const PureState& psi);

// Reduced operator on the kept factors (in their original order).
Matrix partial_trace(const Matrix& m, const DimensionSplit& split,
                     const std::vector<int>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const DimensionSplit& split,
                              const std::vector<int>& keep);

// Purification on dim^2 amplitudes: system factor first, ancilla second.
PureState purify(const DensityOperator& rho);

struct SchmidtDecomposition {
  RealVector coefficients;  // descending, nonnegative
  Matrix left;              // columns form the left basis
  Matrix right;             // columns form the right basis
};

// Schmidt decomposition across a two-factor split.
SchmidtDecomposition schmidt_decompose(const PureState& psi, const DimensionSplit& split);

// Transposes the named factor's indices, leaving the rest untouched.
Matrix partial_transpose(const Matrix& m, const DimensionSplit& split, int subsystem);

// Half the trace norm of a - b.
double trace_distance(const Matrix& a, const Matrix& b);

// Qubit state at Bloch coordinates (radius clamped into [0, 1]).
DensityOperator bloch_density(double r, double theta, double phi);

// Haar-ish random states for tests and the self-test battery.
DensityOperator random_density(int dim, Rng& rng);
PureState random_pure(int dim, Rng& rng);

}  // namespace qcap::core
