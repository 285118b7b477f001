#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcap/channels.hpp"
#include "qcap/entropy.hpp"
#include "qcap/optimize.hpp"
#include "qcap/params.hpp"

using namespace qcap;
using core::RealVector;
using optimize::ExecMode;
using optimize::GridSpec;
using optimize::OptimizationResult;
using optimize::OptimizerConfig;

namespace {

OptimizerConfig small_cfg() {
  OptimizerConfig cfg;
  cfg.restarts = 8;
  return cfg;
}

bool identical(const OptimizationResult& a, const OptimizationResult& b) {
  if (a.best_value != b.best_value) return false;
  if (a.evaluations != b.evaluations) return false;
  if ((a.best_params - b.best_params).cwiseAbs().maxCoeff() != 0.0) return false;
  if (a.restart_values.size() != b.restart_values.size()) return false;
  for (size_t i = 0; i < a.restart_values.size(); ++i)
    if (a.restart_values[i] != b.restart_values[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("maximize: concave quadratic and output-entropy objectives") {
  const optimize::Objective neg_norm = [](const RealVector& x) { return -x.squaredNorm(); };
  const OptimizationResult res = optimize::maximize(neg_norm, 3, small_cfg());
  CHECK(std::abs(res.best_value) <= 1e-6);
  CHECK(res.best_params.cwiseAbs().maxCoeff() <= 1e-3);
  double best = res.restart_values[0];
  for (double v : res.restart_values) best = std::max(best, v);
  CHECK(res.best_value == best);
  CHECK_FALSE(res.certified_global.certified);
  CHECK(res.certified_global.note.find("not certified") != std::string::npos);
  CHECK(res.evaluations > 0);

  const channels::QuantumChannel id2 = channels::identity_channel(2);
  const optimize::Objective entropy = [&](const RealVector& x) {
    return core::von_neumann_entropy(
        channels::apply_raw(id2, core::param_to_density(x, 2).matrix));
  };
  const OptimizationResult smax = optimize::maximize(entropy, 4, small_cfg());
  CHECK(std::abs(smax.best_value - 1.0) <= 1e-6);
}

TEST_CASE("minimize: shifted quadratic and seeded starts") {
  const optimize::Objective shifted = [](const RealVector& x) {
    return (x(0) - 1.0) * (x(0) - 1.0);
  };
  const OptimizationResult res = optimize::minimize(shifted, 1, small_cfg());
  CHECK(std::abs(res.best_value) <= 1e-6);
  CHECK(std::abs(res.best_params(0) - 1.0) <= 1e-3);

  // A seed point at the optimum occupies the leading restart slot.
  RealVector at_opt(1);
  at_opt(0) = 1.0;
  const OptimizationResult seeded =
      optimize::minimize(shifted, 1, small_cfg(), ExecMode::Parallel, {at_opt});
  CHECK(seeded.restart_values[0] <= 1e-10);
  CHECK(seeded.best_value <= 1e-10);

  CHECK_THROWS_AS(optimize::minimize(shifted, 1, small_cfg(), ExecMode::Parallel,
                                     {RealVector::Zero(2)}),
                  DimensionError);
}

TEST_CASE("determinism: repeated runs and execution modes agree bitwise") {
  const optimize::Objective bumpy = [](const RealVector& x) {
    return std::sin(3.0 * x(0)) + 0.1 * x.squaredNorm() + std::cos(2.0 * x(1));
  };
  OptimizerConfig cfg = small_cfg();
  cfg.seed = 9001;
  const OptimizationResult first = optimize::minimize(bumpy, 2, cfg);
  const OptimizationResult second = optimize::minimize(bumpy, 2, cfg);
  CHECK(identical(first, second));

  const OptimizationResult serial = optimize::minimize(bumpy, 2, cfg, ExecMode::Serial);
  const OptimizationResult parallel = optimize::minimize(bumpy, 2, cfg, ExecMode::Parallel);
  CHECK(identical(serial, parallel));
}

TEST_CASE("restart dominance: more restarts never worsen the best value") {
  const optimize::Objective bumpy = [](const RealVector& x) {
    return std::sin(5.0 * x(0)) * std::cos(3.0 * x(1)) + 0.05 * x.squaredNorm();
  };
  OptimizerConfig few = small_cfg();
  few.restarts = 4;
  OptimizerConfig many = small_cfg();
  many.restarts = 16;
  const double few_best = optimize::minimize(bumpy, 2, few).best_value;
  const double many_best = optimize::minimize(bumpy, 2, many).best_value;
  CHECK(many_best <= few_best + 1e-15);
}

TEST_CASE("config validation") {
  const optimize::Objective quad = [](const RealVector& x) { return x.squaredNorm(); };
  OptimizerConfig bad = small_cfg();
  bad.restarts = 0;
  CHECK_THROWS_AS(optimize::minimize(quad, 1, bad), ValidationError);
  bad = small_cfg();
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(optimize::minimize(quad, 1, bad), ValidationError);
}

TEST_CASE("grid_minimize_bloch: constants, pole optima, refinement monotonicity") {
  const optimize::StateObjective constant = [](const core::DensityOperator&) { return 0.25; };
  const GridSpec coarse{8, 12, 12};
  const OptimizationResult flat = optimize::grid_minimize_bloch(constant, coarse, 2);
  CHECK(flat.best_value == 0.25);
  CHECK(flat.certified_global.certified);
  CHECK(flat.certified_global.note.find("full Bloch grid 8x12x12") != std::string::npos);

  // Linear in Bloch z: minimum sits at the south pole (r=1, θ=π), value -1.
  const optimize::StateObjective bloch_z = [](const core::DensityOperator& rho) {
    return (rho.matrix(0, 0) - rho.matrix(1, 1)).real();
  };
  const OptimizationResult polar = optimize::grid_minimize_bloch(bloch_z, coarse, 3);
  CHECK(std::abs(polar.best_value + 1.0) <= 1e-9);
  CHECK(std::abs(polar.best_params(0) - 1.0) <= 1e-6);
  CHECK(std::abs(polar.best_params(1) - std::acos(-1.0)) <= 1e-4);
  REQUIRE(polar.restart_values.size() >= 2);
  for (size_t i = 1; i < polar.restart_values.size(); ++i)
    CHECK(polar.restart_values[i] <= polar.restart_values[i - 1] + 1e-15);

  // Smooth nonlinear objective: refinement rounds never increase the minimum.
  const optimize::StateObjective curved = [](const core::DensityOperator& rho) {
    const double z = (rho.matrix(0, 0) - rho.matrix(1, 1)).real();
    const double x = 2.0 * rho.matrix(0, 1).real();
    return (z - 0.3) * (z - 0.3) + 0.5 * (x + 0.4) * (x + 0.4);
  };
  const OptimizationResult smooth = optimize::grid_minimize_bloch(curved, coarse, 3);
  for (size_t i = 1; i < smooth.restart_values.size(); ++i)
    CHECK(smooth.restart_values[i] <= smooth.restart_values[i - 1] + 1e-15);
  CHECK(smooth.best_value <= 1e-8);

  const OptimizationResult serial =
      optimize::grid_minimize_bloch(curved, coarse, 3, ExecMode::Serial);
  CHECK(serial.best_value == smooth.best_value);
  CHECK((serial.best_params - smooth.best_params).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(optimize::grid_minimize_bloch(constant, GridSpec{1, 12, 12}, 2),
                  ValidationError);
}
