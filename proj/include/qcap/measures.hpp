#pragma once

#include <vector>

#include "qcap/channels.hpp"
#include "qcap/measurement.hpp"
#include "qcap/optimize.hpp"
#include "qcap/states.hpp"

namespace qcap::measures {

using core::DensityOperator;
using core::DimensionSplit;
using core::Matrix;
using core::PureState;
using optimize::ExecMode;
using optimize::OptimizerConfig;

// Σ_i q_i S(B | outcome i) for a measurement acting on the E factor of a
// bipartite B:E state; outcomes with q_i < 1e-12 contribute zero.
double conditional_entropy_term(const Matrix& rho_be, const DimensionSplit& split,
                                const MeasurementKrausSet& m);
double conditional_entropy_term(const channels::JointOutput& joint,
                                const MeasurementKrausSet& m);

// One-measurement classical-correlation term S(ρ_B) - conditional entropy.
// A pointwise lower bound on C←(ρ, B:E) for every complete measurement;
// returned unclamped (the bound reports flag negative values).
double c_arrow_fixed(const Matrix& rho_be, const DimensionSplit& split,
                     const MeasurementKrausSet& m);
double c_arrow_fixed(const channels::JointOutput& joint, const MeasurementKrausSet& m);

// Maximizes c_arrow_fixed over the measurement chart with k outcomes
// (multistart). A lower bound on the true C←. Extra seed measurements (with
// up to k outcomes; zero-padded) occupy leading restarts, and the best
// (k-1)-outcome measurement is always seeded, making the value monotone
// nondecreasing in k.
double c_arrow_optimized(const DensityOperator& rho_be, const DimensionSplit& split,
                         int k, const OptimizerConfig& cfg,
                         const std::vector<MeasurementKrausSet>& seeds = {},
                         ExecMode mode = ExecMode::Parallel);

// Wootters concurrence and the closed-form two-qubit entanglement of
// formation. Require a 4-dimensional state with a 2⊗2 split.
double concurrence(const Matrix& rho);
double eof_two_qubit(const Matrix& rho);

// Convex-roof upper estimate of E_F through decompositions of ρ into
// ensemble_size pure states (the ensemble is charted through a purification
// plus a rank-1 measurement on the ancilla, i.e. an isometry applied to the
// eigen-ensemble). Throws PreconditionError when ensemble_size < rank(ρ).
double eof_estimate(const DensityOperator& rho, const DimensionSplit& split,
                    int ensemble_size, const OptimizerConfig& cfg,
                    ExecMode mode = ExecMode::Parallel);

enum class Separability { Separable, Entangled, Indeterminate };

struct SeparabilityVerdict {
  Separability verdict = Separability::Indeterminate;
  double witness = 0.0;  // minimum partial-transpose eigenvalue
};

// Partial-transpose criterion. Entangled whenever the witness drops below
// -1e-9 (valid in any dimension); Separable only where PPT is exact — one
// factor of dimension 1, or d_A·d_B <= 6 — otherwise Indeterminate.
SeparabilityVerdict ppt_verdict(const Matrix& rho, const DimensionSplit& split);

// |S(ρ_A) - E_F(A:B) - C←(A:C)| on a pure tripartite state: the duality
// residual. Uses the closed-form E_F when A:B is 2⊗2, eof_estimate otherwise;
// C← by measurement optimization on C with k = dim_C^2 outcomes.
double koashi_winter_residual(const PureState& psi, const DimensionSplit& split3,
                              const OptimizerConfig& cfg,
                              ExecMode mode = ExecMode::Parallel);

}  // namespace qcap::measures
