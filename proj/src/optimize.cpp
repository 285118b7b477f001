#include "qcap/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qcap/rng.hpp"

namespace qcap::optimize {

using core::RealVector;

namespace {

struct LocalResult {
  double value = 0.0;
  RealVector point;
  long evaluations = 0;
};

// Standard Nelder–Mead simplex descent (minimizing). Fully serial and
// deterministic: no randomness, stable tie handling via std::stable_sort.
LocalResult nelder_mead(const Objective& f, const RealVector& x0, double step,
                        int max_iterations, double tolerance) {
  const int n = static_cast<int>(x0.size());
  std::vector<RealVector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  long evals = 0;
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  std::vector<int> order(n + 1);
  std::iota(order.begin(), order.end(), 0);
  auto sort_simplex = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
  };

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  for (int iter = 0; iter < max_iterations; ++iter) {
    sort_simplex();
    const int best = order[0], worst = order[n], second_worst = order[n - 1];
    if (vals[worst] - vals[best] <= tolerance) break;

    RealVector centroid = RealVector::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    const RealVector reflected = centroid + kReflect * (centroid - pts[worst]);
    const double f_reflected = f(reflected);
    ++evals;
    if (f_reflected < vals[best]) {
      const RealVector expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = f(expanded);
      ++evals;
      if (f_expanded < f_reflected) {
        pts[worst] = expanded;
        vals[worst] = f_expanded;
      } else {
        pts[worst] = reflected;
        vals[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < vals[second_worst]) {
      pts[worst] = reflected;
      vals[worst] = f_reflected;
      continue;
    }
    const RealVector contracted = centroid + kContract * (pts[worst] - centroid);
    const double f_contracted = f(contracted);
    ++evals;
    if (f_contracted < vals[worst]) {
      pts[worst] = contracted;
      vals[worst] = f_contracted;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      const int idx = order[i];
      pts[idx] = pts[order[0]] + kShrink * (pts[idx] - pts[order[0]]);
      vals[idx] = f(pts[idx]);
      ++evals;
    }
  }
  sort_simplex();
  return LocalResult{vals[order[0]], pts[order[0]], evals};
}

OptimizationResult multistart_minimize(const Objective& f, int dimension,
                                       const OptimizerConfig& cfg, ExecMode mode,
                                       const std::vector<RealVector>& seed_points) {
  if (cfg.restarts < 1) throw ValidationError("OptimizerConfig: restarts must be >= 1");
  if (cfg.tolerance <= 0.0) throw ValidationError("OptimizerConfig: tolerance must be > 0");
  for (const RealVector& s : seed_points)
    if (s.size() != dimension)
      throw DimensionError("seed point dimension does not match the objective");

  const int total = std::max<int>(cfg.restarts, static_cast<int>(seed_points.size()));
  // Initial points are fixed up front from per-restart streams, so the result
  // cannot depend on which thread runs which restart.
  std::vector<RealVector> starts(total);
  for (int r = 0; r < total; ++r) {
    if (r < static_cast<int>(seed_points.size())) {
      starts[r] = seed_points[r];
    } else {
      core::Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
      starts[r].resize(dimension);
      for (int i = 0; i < dimension; ++i) starts[r](i) = rng.gaussian();
    }
  }

  std::vector<LocalResult> locals(total);
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < total; ++r)
      locals[r] = nelder_mead(f, starts[r], 0.5, cfg.max_iterations, cfg.tolerance);
  } else {
    for (int r = 0; r < total; ++r)
      locals[r] = nelder_mead(f, starts[r], 0.5, cfg.max_iterations, cfg.tolerance);
  }

  // Serial reduction; ties break toward the lowest restart index.
  int best = 0;
  long evals = 0;
  for (int r = 0; r < total; ++r) {
    evals += locals[r].evaluations;
    if (locals[r].value < locals[best].value) best = r;
  }
  OptimizationResult out;
  out.best_value = locals[best].value;
  out.best_params = locals[best].point;
  out.restart_values.reserve(total);
  for (const LocalResult& l : locals) out.restart_values.push_back(l.value);
  out.evaluations = evals;
  out.certified_global = {false, "multistart local search; global optimum not certified"};
  return out;
}

}  // namespace

OptimizationResult minimize(const Objective& objective, int dimension,
                            const OptimizerConfig& cfg, ExecMode mode,
                            const std::vector<RealVector>& seed_points) {
  return multistart_minimize(objective, dimension, cfg, mode, seed_points);
}

OptimizationResult maximize(const Objective& objective, int dimension,
                            const OptimizerConfig& cfg, ExecMode mode,
                            const std::vector<RealVector>& seed_points) {
  Objective negated = [&objective](const RealVector& x) { return -objective(x); };
  OptimizationResult out = multistart_minimize(negated, dimension, cfg, mode, seed_points);
  out.best_value = -out.best_value;
  for (double& v : out.restart_values) v = -v;
  return out;
}

OptimizationResult grid_minimize_bloch(const StateObjective& objective,
                                       const GridSpec& grid, int refinement_rounds,
                                       ExecMode mode) {
  if (grid.radial < 2 || grid.polar < 2 || grid.azimuthal < 1)
    throw ValidationError("grid_minimize_bloch: grid needs >= 2 radial, >= 2 polar and >= 1 azimuthal points");

  const long n_cells = static_cast<long>(grid.radial) * grid.polar * grid.azimuthal;
  const double dr0 = 1.0 / (grid.radial - 1);
  const double dth0 = M_PI / (grid.polar - 1);
  const double dph0 = 2.0 * M_PI / grid.azimuthal;

  auto eval_at = [&objective](double r, double th, double ph) {
    return objective(core::bloch_density(r, th, ph));
  };

  // Full-ball scan; values land in a per-index buffer and the argmin runs
  // serially (lowest flat index wins ties), so thread count cannot matter.
  std::vector<double> values(n_cells);
  auto cell_value = [&](long idx) {
    const int ia = static_cast<int>(idx % grid.azimuthal);
    const int ip = static_cast<int>((idx / grid.azimuthal) % grid.polar);
    const int ir = static_cast<int>(idx / (static_cast<long>(grid.azimuthal) * grid.polar));
    return eval_at(ir * dr0, ip * dth0, ia * dph0);
  };
  if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n_cells; ++i) values[i] = cell_value(i);
  } else {
    for (long i = 0; i < n_cells; ++i) values[i] = cell_value(i);
  }
  long best_idx = 0;
  for (long i = 1; i < n_cells; ++i)
    if (values[i] < values[best_idx]) best_idx = i;

  double best_value = values[best_idx];
  double best_r = (best_idx / (static_cast<long>(grid.azimuthal) * grid.polar)) * dr0;
  double best_th = ((best_idx / grid.azimuthal) % grid.polar) * dth0;
  double best_ph = (best_idx % grid.azimuthal) * dph0;
  long evaluations = n_cells;

  std::vector<double> round_minima{best_value};

  // Local refinements: an 11x11x11 sub-grid spanning one coarse cell in each
  // direction around the incumbent. The incumbent sits on the sub-grid, so
  // refinement can only improve the minimum.
  double dr = dr0, dth = dth0, dph = dph0;
  constexpr int kSub = 11;  // odd, so the center point is re-evaluated exactly
  for (int round = 0; round < refinement_rounds; ++round) {
    const long n_sub = static_cast<long>(kSub) * kSub * kSub;
    std::vector<double> sub_values(n_sub);
    const double r0 = best_r, th0 = best_th, ph0 = best_ph;
    const double sr = dr, sth = dth, sph = dph;
    auto sub_value = [&](long idx) {
      const int ia = static_cast<int>(idx % kSub);
      const int ip = static_cast<int>((idx / kSub) % kSub);
      const int ir = static_cast<int>(idx / (kSub * kSub));
      const double r = std::clamp(r0 + (ir - kSub / 2) * (2.0 * sr / (kSub - 1)), 0.0, 1.0);
      const double th = th0 + (ip - kSub / 2) * (2.0 * sth / (kSub - 1));
      const double ph = ph0 + (ia - kSub / 2) * (2.0 * sph / (kSub - 1));
      return eval_at(r, th, ph);
    };
    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
      for (long i = 0; i < n_sub; ++i) sub_values[i] = sub_value(i);
    } else {
      for (long i = 0; i < n_sub; ++i) sub_values[i] = sub_value(i);
    }
    long sub_best = 0;
    for (long i = 1; i < n_sub; ++i)
      if (sub_values[i] < sub_values[sub_best]) sub_best = i;
    evaluations += n_sub;
    if (sub_values[sub_best] < best_value) {
      best_value = sub_values[sub_best];
      const int ia = static_cast<int>(sub_best % kSub);
      const int ip = static_cast<int>((sub_best / kSub) % kSub);
      const int ir = static_cast<int>(sub_best / (kSub * kSub));
      best_r = std::clamp(r0 + (ir - kSub / 2) * (2.0 * sr / (kSub - 1)), 0.0, 1.0);
      best_th = th0 + (ip - kSub / 2) * (2.0 * sth / (kSub - 1));
      best_ph = ph0 + (ia - kSub / 2) * (2.0 * sph / (kSub - 1));
    }
    dr = 2.0 * dr / (kSub - 1);
    dth = 2.0 * dth / (kSub - 1);
    dph = 2.0 * dph / (kSub - 1);
    round_minima.push_back(best_value);
  }

  // Final simplex polish from the refined cell (serial, deterministic).
  Objective polish = [&eval_at](const RealVector& x) {
    return eval_at(x(0), x(1), x(2));
  };
  RealVector start(3);
  start << best_r, best_th, best_ph;
  const LocalResult polished = nelder_mead(polish, start, std::max(dr, 1e-6), 400, 1e-14);
  evaluations += polished.evaluations;
  if (polished.value < best_value) {
    best_value = polished.value;
    best_r = std::clamp(polished.point(0), 0.0, 1.0);
    best_th = polished.point(1);
    best_ph = polished.point(2);
  }
  round_minima.push_back(best_value);

  OptimizationResult out;
  out.best_value = best_value;
  out.best_params.resize(3);
  out.best_params << best_r, best_th, best_ph;
  out.restart_values = std::move(round_minima);
  out.evaluations = evaluations;
  std::ostringstream note;
  note << "full Bloch grid " << grid.radial << "x" << grid.polar << "x" << grid.azimuthal
       << " (dr=" << dr0 << ", dtheta=" << dth0 << ", dphi=" << dph0 << "); "
       << refinement_rounds << " refinement rounds to dr=" << dr
       << "; simplex polish applied";
  out.certified_global = {true, note.str()};
  return out;
}

}  // namespace qcap::optimize
