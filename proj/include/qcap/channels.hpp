#pragma once

#include <string>
#include <vector>

#include "qcap/entropy.hpp"
#include "qcap/states.hpp"

namespace qcap::channels {

using core::DensityOperator;
using core::DimensionSplit;
using core::Matrix;

struct QuantumChannel {
  int d_in = 0;
  int d_out = 0;
  std::vector<Matrix> kraus;  // each d_out × d_in
  std::string name;
};

struct ValidationReport {
  double completeness_residual = 0.0;
  bool pass = false;
};

// Report-style check of Σ K_i†K_i = I (passes iff residual <= 1e-9).
ValidationReport validate(const QuantumChannel& T);

// Shape-checks the Kraus list and enforces completeness; throws
// DimensionError / ValidationError naming the residual.
QuantumChannel make_channel(int d_in, int d_out, std::vector<Matrix> kraus,
                            const std::string& name = "");

struct StinespringIsometry {
  int d_in = 0;
  int d_out = 0;
  int d_env = 0;
  Matrix matrix;  // (d_out·d_env) × d_in
};

// Joint output UρU† on B⊗E with its declared split.
struct JointOutput {
  DensityOperator state;
  DimensionSplit split;  // {d_out, d_env} labeled B, E
};

// T(ρ) = Σ K_i ρ K_i†.
DensityOperator apply(const QuantumChannel& T, const DensityOperator& rho);
Matrix apply_raw(const QuantumChannel& T, const Matrix& rho);

// Stinespring dilation U|ψ> = Σ_i (K_i|ψ>) ⊗ |i>_E, environment basis indexed
// by Kraus position. Throws ValidationError for an invalid channel.
StinespringIsometry dilate(const QuantumChannel& T);

JointOutput joint_output(const QuantumChannel& T, const DensityOperator& rho);
// Hot path: UρU† from a precomputed dilation.
Matrix joint_output_raw(const StinespringIsometry& U, const Matrix& rho);

// The channel to the environment: ρ ↦ tr_B(UρU†).
QuantumChannel complementary(const QuantumChannel& T);

// Zoo. amplitude_damping keeps both Kraus operators at p = 0 (d_env stays 2
// across a sweep); depolarizing/dephasing are qubit channels; identity is
// d-dimensional with a single Kraus operator.
QuantumChannel amplitude_damping(double p);
QuantumChannel depolarizing(double q);
QuantumChannel dephasing(double q);
QuantumChannel identity_channel(int d);

// Dispatch by name ("amplitude-damping", "depolarizing", "dephasing",
// "identity"; underscores accepted). Throws ValidationError for unknown names
// or out-of-range parameters.
QuantumChannel channel_zoo(const std::string& name, double param);

// Random channel through a Haar-ish random isometry (exactly complete).
QuantumChannel random_channel(int d_in, int d_out, int n_kraus, core::Rng& rng);

}  // namespace qcap::channels
