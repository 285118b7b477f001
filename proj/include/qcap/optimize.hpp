#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcap/states.hpp"

namespace qcap::optimize {

// Per-axis resolutions of the Bloch-ball certification grid.
struct GridSpec {
  int radial = 60;
  int polar = 120;
  int azimuthal = 120;
};

struct OptimizerConfig {
  std::uint64_t seed = 42;
  int restarts = 32;
  int max_iterations = 2000;
  double tolerance = 1e-8;  // objective-change stopping threshold
  std::optional<GridSpec> grid;
  int refinement_rounds = 3;
};

// Every kernel has a serial reference path and an OpenMP path; both produce
// bit-identical results (work is stored per index and reduced serially).
enum class ExecMode { Serial, Parallel };

struct CertifiedNote {
  bool certified = false;
  std::string note;
};

struct OptimizationResult {
  double best_value = 0.0;
  core::RealVector best_params;
  std::vector<double> restart_values;  // per restart (or per grid round)
  long evaluations = 0;
  CertifiedNote certified_global;
};

using Objective = std::function<double(const core::RealVector&)>;
using StateObjective = std::function<double(const core::DensityOperator&)>;

// Multistart Nelder–Mead. Restart r draws its initial point from the
// deterministic stream (cfg.seed, r); seed_points occupy the leading restart
// slots. Deterministic for a fixed config regardless of thread count; ties
// between restarts break toward the lowest restart index. The objective must
// be total on R^dimension.
OptimizationResult maximize(const Objective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            ExecMode mode = ExecMode::Parallel,
                            const std::vector<core::RealVector>& seed_points = {});
OptimizationResult minimize(const Objective& objective, int dimension,
                            const OptimizerConfig& cfg,
                            ExecMode mode = ExecMode::Parallel,
                            const std::vector<core::RealVector>& seed_points = {});

// Exhaustive scan of the full Bloch ball (radius × polar × azimuth), followed
// by local grid refinements around the best cell and a final simplex polish.
// best_params holds (r, θ, φ); the certification note carries the grid
// resolutions; restart_values holds the per-round minima (nonincreasing).
OptimizationResult grid_minimize_bloch(const StateObjective& objective,
                                       const GridSpec& grid, int refinement_rounds,
                                       ExecMode mode = ExecMode::Parallel);

}  // namespace qcap::optimize
