#pragma once

#include <vector>

#include "qcap/measurement.hpp"
#include "qcap/states.hpp"

namespace qcap::core {

// Number of real parameters for param_to_density: d^2.
int density_param_count(int d);

// Chart from R^{d^2} onto density operators: ρ = LL†/tr(LL†) with L the
// complex lower-triangular matrix filled from params (real diagonal first,
// then row-major [re, im] pairs below the diagonal). The all-zero vector
// falls back to the maximally mixed state. Surjective onto full-rank states.
DensityOperator param_to_density(const RealVector& params, int d);

// Chart from R^{2·k·dim_e^2} onto complete measurement sets: raw matrices
// A_i are filled row-major from [re, im] pairs, G = Σ A_i†A_i, and
// P_i = A_i G^{-1/2}. A Gram matrix with an eigenvalue below 1e-12 is
// regularized by adding 1e-12·I before inversion.
measures::MeasurementKrausSet param_to_measurement(const RealVector& params, int dim_e,
                                                   int k);

// Chart onto input ensembles: n weight parameters (squared then normalized;
// all-zero weights fall back to uniform) followed by n state charts of d^2
// parameters each.
struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DensityOperator> states;
};
int ensemble_param_count(int d, int n);
Ensemble param_to_ensemble(const RealVector& params, int d, int n);

}  // namespace qcap::core
