#pragma once

#include <string>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/measures.hpp"
#include "qcap/optimize.hpp"

namespace qcap::bounds {

using channels::QuantumChannel;
using core::DensityOperator;
using measures::MeasurementKrausSet;
using optimize::ExecMode;
using optimize::OptimizerConfig;

enum class BoundKind { CertifiedUpperBound, HeuristicLowerEstimate };

struct BoundDiagnostics {
  double restart_spread = 0.0;      // max - min over restarts (0 for pure grid)
  std::string grid_resolution;      // human-readable resolution of the grid stage
  DensityOperator best_state;       // argument achieving the reported extremum
  std::vector<std::string> notes;   // soundness bookkeeping
  bool negative_correlation = false;
};

// value = s_max_term - correlation_term holds exactly for the decomposing
// bounds. kind is CertifiedUpperBound only when every internal optimization
// errs on the safe side (maximizations may only under-approximate where that
// loosens the bound; minimizations run on the exhaustive grid with their
// resolution stated in the diagnostics).
struct BoundReport {
  double value = 0.0;
  BoundKind kind = BoundKind::HeuristicLowerEstimate;
  double s_max_term = 0.0;
  double correlation_term = 0.0;
  BoundDiagnostics diagnostics;
};

// Maximum output entropy. The objective is concave, so every local maximum is
// global; certified to optimizer tolerance.
double s_max(const QuantumChannel& T, const OptimizerConfig& cfg,
             ExecMode mode = ExecMode::Parallel);

// s_max plus all distinct multistart optima within 1e-7 of it (for the
// certificates, which must examine every located maximizer).
struct SMaxResult {
  double value = 0.0;
  std::vector<DensityOperator> optima;
};
SMaxResult s_max_states(const QuantumChannel& T, const OptimizerConfig& cfg,
                        ExecMode mode = ExecMode::Parallel);

// s_max(T) - min_ρ c_arrow_fixed(UρU†, m), the one-measurement capacity upper
// bound. The minimization runs over the full Bloch-ball grid for qubit inputs
// (certified, resolution reported); above that, multistart only, and the kind
// downgrades with an explicit "global-min not certified" note.
BoundReport classical_bound_simple(const QuantumChannel& T, const MeasurementKrausSet& m,
                                   const OptimizerConfig& cfg,
                                   ExecMode mode = ExecMode::Parallel);

// max over n_terms-point input ensembles of
//   S(T(Σ p_j ρ_j)) - Σ_j p_j c_arrow_fixed(Uρ_jU†, m).
// For n_terms = 1 on a qubit input the maximization is run as a grid-certified
// minimization of the entropy-deficit-penalized correlation term
//   min_ρ [c_arrow_fixed(UρU†, m) + (s_max - S(T(ρ)))],
// so the report decomposes as s_max - correlation_term and carries the same
// certification as classical_bound_simple. Larger ensembles (or inputs beyond
// qubits) are multistart searches reported as heuristic lower estimates of
// the true ensemble bound.
BoundReport classical_bound_ensemble(const QuantumChannel& T, const MeasurementKrausSet& m,
                                     int n_terms, const OptimizerConfig& cfg,
                                     ExecMode mode = ExecMode::Parallel);

// Holevo quantity through the entanglement-of-formation correspondence
// χ = max_ρ [S(T(ρ)) - E_F(UρU†, B:E)]; exact two-qubit E_F for channels with
// qubit output and at most two Kraus operators (E_F = 0 when either factor is
// trivial), eof_estimate otherwise. Single-shot lower-bound estimate.
double holevo_chi_msw(const QuantumChannel& T, const OptimizerConfig& cfg,
                      ExecMode mode = ExecMode::Parallel);

// Direct ensemble form: max over n_signals-point ensembles of
// S(Σ p_j T(ρ_j)) - Σ p_j S(T(ρ_j)). Single-shot lower-bound estimate.
double holevo_chi_ensemble(const QuantumChannel& T, int n_signals,
                           const OptimizerConfig& cfg,
                           ExecMode mode = ExecMode::Parallel);

// Single-shot coherent information max_ρ [S(T(ρ)) - S(T_c(ρ))], reported
// unclamped (negative values witness the antidegradable regime).
double coherent_information_q1(const QuantumChannel& T, const OptimizerConfig& cfg,
                               ExecMode mode = ExecMode::Parallel);

// Entanglement-assisted capacity max_ρ [S(ρ) + S(T(ρ)) - S(T_c(ρ))] (the
// mutual information of the purified input); concave objective, certified to
// optimizer tolerance.
double entanglement_assisted_capacity(const QuantumChannel& T, const OptimizerConfig& cfg,
                                      ExecMode mode = ExecMode::Parallel);

enum class CertVerdict { MaximumCapacityPossible, GapCertified, Indeterminate };

struct CapacityCertificate {
  CertVerdict verdict = CertVerdict::Indeterminate;
  DensityOperator optimal_state;
  measures::SeparabilityVerdict separability;
  std::string detail;
};

// Classical certificate: locates every S_max-achieving input found by
// multistart and tests the joint output for separability across B:E.
// Entangled at all of them → GapCertified; Separable at any → maximum
// capacity remains possible; otherwise Indeterminate.
CapacityCertificate max_capacity_certificate_classical(const QuantumChannel& T,
                                                       const OptimizerConfig& cfg,
                                                       ExecMode mode = ExecMode::Parallel);

// Quantum certificate: searches for an input with S(T(ρ)) >= s_max - 1e-6
// whose joint output is a B:E product to trace distance 1e-6. Found →
// MaximumCapacityPossible; exhaustive qubit grid finding none → GapCertified;
// otherwise Indeterminate.
CapacityCertificate max_quantum_capacity_certificate(const QuantumChannel& T,
                                                     const OptimizerConfig& cfg,
                                                     ExecMode mode = ExecMode::Parallel);

// Given ψ on R⊗A whose joint output is a B:E product to trace distance tol,
// builds the input |ν⟩ = Σ_i α_i |i⟩_R |d_{i,0}⟩_A whose A-reduction achieves
// coherent information S(ρ_B) (within 10·tol). Throws ProductStructureError
// (carrying the measured distance) when the precondition fails.
core::PureState construct_perfect_input(const QuantumChannel& T, const core::PureState& psi,
                                        double tol);

}  // namespace qcap::bounds
