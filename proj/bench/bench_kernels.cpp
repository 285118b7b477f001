// Serial reference vs OpenMP kernels. Both paths must return bit-identical
// results, so the only interesting number here is the speedup.
#include <benchmark/benchmark.h>

#include <qcap/bounds.hpp>
#include <qcap/channels.hpp>
#include <qcap/entropy.hpp>
#include <qcap/measurement.hpp>
#include <qcap/measures.hpp>
#include <qcap/optimize.hpp>
#include <qcap/params.hpp>
#include <qcap/states.hpp>

namespace {

using qcap::optimize::ExecMode;

struct Fixture {
  qcap::channels::QuantumChannel t = qcap::channels::amplitude_damping(0.25);
  qcap::channels::StinespringIsometry u = qcap::channels::dilate(t);
  qcap::core::DimensionSplit split =
      qcap::core::DimensionSplit::bipartite(t.d_out, static_cast<int>(t.kraus.size()), "B", "E");
  qcap::measures::MeasurementKrausSet m = qcap::measures::fig2_measurement(3);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void bm_grid_penalized(benchmark::State& state, ExecMode mode) {
  const Fixture& f = fixture();
  const qcap::optimize::GridSpec grid{16, 24, 24};
  const double smax = 1.0;
  const qcap::optimize::StateObjective penalized =
      [&f, smax](const qcap::core::DensityOperator& rho) {
        const double corr = qcap::measures::c_arrow_fixed(
            qcap::channels::joint_output_raw(f.u, rho.matrix), f.split, f.m);
        const double out_entropy =
            qcap::core::von_neumann_entropy(qcap::channels::apply_raw(f.t, rho.matrix));
        return corr + (smax - out_entropy);
      };
  double sink = 0.0;
  for (auto _ : state) {
    const qcap::optimize::OptimizationResult res =
        qcap::optimize::grid_minimize_bloch(penalized, grid, 2, mode);
    sink += res.best_value;
    benchmark::DoNotOptimize(sink);
  }
}

void bm_multistart_smax(benchmark::State& state, ExecMode mode) {
  const Fixture& f = fixture();
  qcap::optimize::OptimizerConfig cfg;
  cfg.restarts = 16;
  const qcap::optimize::Objective objective = [&f](const qcap::core::RealVector& x) {
    const qcap::core::DensityOperator rho = qcap::core::param_to_density(x, 2);
    return qcap::core::von_neumann_entropy(qcap::channels::apply_raw(f.t, rho.matrix));
  };
  double sink = 0.0;
  for (auto _ : state) {
    const qcap::optimize::OptimizationResult res =
        qcap::optimize::maximize(objective, 4, cfg, mode);
    sink += res.best_value;
    benchmark::DoNotOptimize(sink);
  }
}

void bm_c_arrow_eval(benchmark::State& state) {
  const Fixture& f = fixture();
  const qcap::core::DensityOperator rho = qcap::core::bloch_density(0.6, 1.1, 0.3);
  const qcap::core::Matrix joint = qcap::channels::joint_output_raw(f.u, rho.matrix);
  double sink = 0.0;
  for (auto _ : state) {
    sink += qcap::measures::c_arrow_fixed(joint, f.split, f.m);
    benchmark::DoNotOptimize(sink);
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_grid_penalized, serial, ExecMode::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_grid_penalized, parallel, ExecMode::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_multistart_smax, serial, ExecMode::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_multistart_smax, parallel, ExecMode::Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_c_arrow_eval);

BENCHMARK_MAIN();
