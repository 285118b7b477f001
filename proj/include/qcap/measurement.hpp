#pragma once

#include <string>
#include <vector>

#include "qcap/linalg.hpp"

namespace qcap::measures {

// A complete set of measurement Kraus operators acting on one tensor factor
// (the environment, in the bound computations): Σ P_i†P_i = I.
struct MeasurementKrausSet {
  int dim = 0;
  std::vector<core::Matrix> kraus;
  std::string name;
};

// max |Σ P_i†P_i - I|.
double completeness_residual(const MeasurementKrausSet& m);

// Validates square shapes and completeness (residual <= 1e-9), naming the
// residual in the error message on failure.
MeasurementKrausSet make_measurement(int dim, std::vector<core::Matrix> kraus,
                                     const std::string& name = "");

// {I_dim}: the single uninformative outcome.
MeasurementKrausSet trivial_measurement(int dim);

// Rank-1 projectors onto the computational basis.
MeasurementKrausSet computational_measurement(int dim);

// The built-in two-outcome-plus-remainder family on a qubit environment:
//   P0 = |1><1| / 2,   P1 = (all-ones) / x,   P2 = (I - P0†P0 - P1†P1)^{1/2},
// stated in this library's environment basis (Kraus-index ordering, where
// |0>_E flags the damping event for the amplitude-damping channel).
// Throws ValidationError when the remainder is not positive semidefinite.
MeasurementKrausSet fig2_measurement(int x);

}  // namespace qcap::measures
