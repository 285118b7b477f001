#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qcap/entropy.hpp"
#include "qcap/linalg.hpp"
#include "qcap/params.hpp"
#include "qcap/rng.hpp"
#include "qcap/states.hpp"

using namespace qcap;
using core::Complex;
using core::DensityOperator;
using core::DimensionSplit;
using core::Matrix;
using core::PureState;
using core::RealVector;
using core::Rng;
using core::Vector;

namespace {

Matrix eye(int d) { return Matrix::Identity(d, d); }

Vector basis(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

Vector bell() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

Matrix random_hermitian(int d, Rng& rng) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return Matrix(0.5 * (g + g.adjoint()));
}

// Hand-rolled reduction to the first factor of an a⊗b system: the plain
// double sum out(a,a') = Σ_b m(a·db+b, a'·db+b), independent of the library's
// stride machinery.
Matrix ptrace_second_oracle(const Matrix& m, int da, int db) {
  Matrix out = Matrix::Zero(da, da);
  for (int a = 0; a < da; ++a)
    for (int ap = 0; ap < da; ++ap)
      for (int b = 0; b < db; ++b) out(a, ap) += m(a * db + b, ap * db + b);
  return out;
}

}  // namespace

TEST_CASE("tensor: identities, basis projectors, bit flips") {
  CHECK(core::max_abs(core::tensor(eye(2), eye(2)) - eye(4)) <= 1e-15);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;  // |0>⊗|1> is flat index 1 (left factor slow)
  CHECK(core::max_abs(core::tensor(p0, p1) - expected) <= 1e-15);

  const Matrix xx = core::tensor(pauli_x(), pauli_x());
  const Vector out = xx * Vector(basis(4, 0));
  CHECK((out - basis(4, 3)).norm() <= 1e-15);
}

TEST_CASE("partial_trace: Bell, product, and double-sum oracle") {
  const DimensionSplit split22 = DimensionSplit::bipartite(2, 2);

  const Matrix bell_proj = Vector(bell()) * Vector(bell()).adjoint();
  CHECK(core::max_abs(core::partial_trace(bell_proj, split22, {0}) - 0.5 * eye(2)) <= 1e-12);
  CHECK(core::max_abs(core::partial_trace(bell_proj, split22, {1}) - 0.5 * eye(2)) <= 1e-12);

  Rng rng(7, 0);
  const DensityOperator rho = core::random_density(2, rng);
  const DensityOperator sigma = core::random_density(3, rng);
  const Matrix prod = core::tensor(rho.matrix, sigma.matrix);
  const DimensionSplit split23 = DimensionSplit::bipartite(2, 3);
  CHECK(core::max_abs(core::partial_trace(prod, split23, {0}) - rho.matrix) <= 1e-12);
  CHECK(core::max_abs(core::partial_trace(prod, split23, {1}) - sigma.matrix) <= 1e-12);

  // Random 3-qubit state: library vs the independent double sum, and tracing
  // one factor at a time vs both at once.
  const DensityOperator abc = core::random_density(8, rng);
  const DimensionSplit split222{{2, 2, 2}, {"A", "B", "C"}};
  const Matrix keep_a = core::partial_trace(abc.matrix, split222, {0});
  CHECK(core::max_abs(keep_a - ptrace_second_oracle(abc.matrix, 2, 4)) <= 1e-12);
  const Matrix ab = core::partial_trace(abc.matrix, split222, {0, 1});
  const Matrix a_via_ab = core::partial_trace(ab, DimensionSplit::bipartite(2, 2), {0});
  CHECK(core::max_abs(keep_a - a_via_ab) <= 1e-12);
  CHECK(std::abs(keep_a.trace().real() - 1.0) <= 1e-12);

  CHECK_THROWS_AS(core::partial_trace(abc.matrix, split23, {0}), DimensionError);
  CHECK_THROWS_AS(core::partial_trace(abc.matrix, split222, {3}), DimensionError);
}

TEST_CASE("eig_hermitian: known spectra, reconstruction, validation") {
  Matrix d3 = Matrix::Zero(3, 3);
  d3(0, 0) = 3.0;
  d3(1, 1) = 1.0;
  d3(2, 2) = 2.0;
  const core::EigenSystem es = core::eig_hermitian(d3);
  CHECK(es.values(0) == doctest::Approx(3.0));
  CHECK(es.values(1) == doctest::Approx(2.0));
  CHECK(es.values(2) == doctest::Approx(1.0));

  const core::EigenSystem ex = core::eig_hermitian(pauli_x());
  CHECK(ex.values(0) == doctest::Approx(1.0));
  CHECK(ex.values(1) == doctest::Approx(-1.0));

  Rng rng(11, 0);
  const Matrix h = random_hermitian(4, rng);
  const core::EigenSystem eh = core::eig_hermitian(h);
  const Matrix recon =
      eh.vectors * eh.values.cast<Complex>().asDiagonal() * eh.vectors.adjoint();
  CHECK(core::max_abs(h - recon) <= 1e-9);
  CHECK(core::max_abs(eh.vectors.adjoint() * eh.vectors - eye(4)) <= 1e-9);
  for (int i = 0; i + 1 < 4; ++i) CHECK(eh.values(i) >= eh.values(i + 1));

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(core::eig_hermitian(bad), ValidationError);
}

TEST_CASE("von_neumann_entropy: closed-form anchors and range") {
  CHECK(std::abs(core::von_neumann_entropy(Matrix(0.5 * eye(2))) - 1.0) <= 1e-12);

  Rng rng(13, 0);
  const PureState psi = core::random_pure(3, rng);
  CHECK(core::von_neumann_entropy(core::projector(psi)) <= 1e-9);

  Matrix quarter = Matrix::Zero(2, 2);
  quarter(0, 0) = 0.25;
  quarter(1, 1) = 0.75;
  // -(1/4)log2(1/4) - (3/4)log2(3/4), evaluated independently
  CHECK(std::abs(core::von_neumann_entropy(quarter) - 0.8112781244591328) <= 1e-12);

  CHECK(core::binary_entropy(0.0) == 0.0);
  CHECK(core::binary_entropy(1.0) == 0.0);
  CHECK(std::abs(core::binary_entropy(0.5) - 1.0) <= 1e-12);

  for (int t = 0; t < 20; ++t) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 3);
    const DensityOperator rho = core::random_density(d, rng);
    const double s = core::von_neumann_entropy(rho.matrix);
    CHECK(s >= 0.0);
    CHECK(s <= std::log2(d) + 1e-9);
  }
}

TEST_CASE("entropy: concavity and subadditivity on random states") {
  Rng rng(17, 0);
  for (int t = 0; t < 20; ++t) {
    const DensityOperator rho = core::random_density(3, rng);
    const DensityOperator sigma = core::random_density(3, rng);
    const double lam = rng.uniform();
    const Matrix mix = lam * rho.matrix + (1.0 - lam) * sigma.matrix;
    CHECK(core::von_neumann_entropy(mix) >=
          lam * core::von_neumann_entropy(rho.matrix) +
              (1.0 - lam) * core::von_neumann_entropy(sigma.matrix) - 1e-9);
  }
  for (int t = 0; t < 20; ++t) {
    const DimensionSplit split = DimensionSplit::bipartite(2, 3);
    const DensityOperator rho = core::random_density(6, rng);
    const double s_ab = core::von_neumann_entropy(rho.matrix);
    const double s_a = core::von_neumann_entropy(core::partial_trace(rho.matrix, split, {0}));
    const double s_b = core::von_neumann_entropy(core::partial_trace(rho.matrix, split, {1}));
    CHECK(s_ab <= s_a + s_b + 1e-9);
  }
}

TEST_CASE("schmidt_decompose: rank-1, Bell, spectrum consistency") {
  Rng rng(19, 0);
  const PureState a = core::random_pure(2, rng);
  const PureState b = core::random_pure(3, rng);
  Vector prod(6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) prod(i * 3 + j) = a.amplitudes(i) * b.amplitudes(j);
  const core::SchmidtDecomposition sd_prod =
      core::schmidt_decompose(core::make_pure(prod), DimensionSplit::bipartite(2, 3));
  CHECK(sd_prod.coefficients(0) == doctest::Approx(1.0));
  CHECK(std::abs(sd_prod.coefficients(1)) <= 1e-9);

  const core::SchmidtDecomposition sd_bell =
      core::schmidt_decompose(core::make_pure(bell()), DimensionSplit::bipartite(2, 2));
  CHECK(sd_bell.coefficients(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sd_bell.coefficients(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

  const PureState psi = core::random_pure(9, rng);
  const DimensionSplit split33 = DimensionSplit::bipartite(3, 3);
  const core::SchmidtDecomposition sd = core::schmidt_decompose(psi, split33);
  CHECK(std::abs(sd.coefficients.squaredNorm() - 1.0) <= 1e-9);
  // coefficients² must be the reduced-state spectrum
  const Matrix red = core::partial_trace(core::projector(psi).matrix, split33, {0});
  const RealVector spec = core::eigvals_hermitian(red);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(sd.coefficients(i) * sd.coefficients(i) - spec(i)) <= 1e-9);
  // reconstruction fidelity
  Vector recon = Vector::Zero(9);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        recon(i * 3 + j) += sd.coefficients(k) * sd.left(i, k) * sd.right(j, k);
  CHECK(std::abs(std::abs(recon.dot(psi.amplitudes)) - 1.0) <= 1e-9);

  CHECK_THROWS_AS(core::schmidt_decompose(psi, DimensionSplit{{3, 3, 1}, {"A", "B", "C"}}),
                  DimensionError);
}

TEST_CASE("purify: reductions, entropy consistency, round trip") {
  Rng rng(23, 0);

  const PureState phi = core::random_pure(2, rng);
  const PureState pure_purified = core::purify(core::projector(phi));
  const DimensionSplit split22 = DimensionSplit::bipartite(2, 2);
  const Matrix anc =
      core::partial_trace(core::projector(pure_purified).matrix, split22, {1});
  CHECK(core::von_neumann_entropy(anc) <= 1e-9);  // ancilla stays rank 1

  const PureState mixed_purified =
      core::purify(core::density_unchecked(Matrix(0.5 * eye(2))));
  const Matrix sys =
      core::partial_trace(core::projector(mixed_purified).matrix, split22, {0});
  CHECK(core::max_abs(sys - 0.5 * eye(2)) <= 1e-9);
  CHECK(std::abs(core::von_neumann_entropy(
                     core::partial_trace(core::projector(mixed_purified).matrix, split22,
                                         {1})) -
                 1.0) <= 1e-9);  // Bell-equivalent: maximally entangled

  const DensityOperator rho = core::random_density(3, rng);
  const PureState psi = core::purify(rho);
  const DimensionSplit split33 = DimensionSplit::bipartite(3, 3);
  const Matrix back = core::partial_trace(core::projector(psi).matrix, split33, {0});
  CHECK(core::max_abs(back - rho.matrix) <= 1e-9);
  CHECK(std::abs(core::von_neumann_entropy(
                     core::partial_trace(core::projector(psi).matrix, split33, {1})) -
                 core::von_neumann_entropy(rho.matrix)) <= 1e-9);
}

TEST_CASE("partial_transpose: PSD on products, Bell witness, involution") {
  Rng rng(29, 0);
  const DimensionSplit split22 = DimensionSplit::bipartite(2, 2);

  const DensityOperator rho = core::random_density(2, rng);
  const DensityOperator sigma = core::random_density(2, rng);
  const Matrix prod = core::tensor(rho.matrix, sigma.matrix);
  const RealVector prod_pt_vals =
      core::eigvals_hermitian(core::partial_transpose(prod, split22, 1));
  CHECK(prod_pt_vals(prod_pt_vals.size() - 1) >= -1e-12);

  const Matrix bell_proj = Vector(bell()) * Vector(bell()).adjoint();
  const RealVector bell_pt_vals =
      core::eigvals_hermitian(core::partial_transpose(bell_proj, split22, 1));
  CHECK(std::abs(bell_pt_vals(bell_pt_vals.size() - 1) + 0.5) <= 1e-12);

  const DensityOperator abc = core::random_density(6, rng);
  const DimensionSplit split23 = DimensionSplit::bipartite(2, 3);
  for (int sub = 0; sub < 2; ++sub) {
    const Matrix twice = core::partial_transpose(
        core::partial_transpose(abc.matrix, split23, sub), split23, sub);
    CHECK(core::max_abs(twice - abc.matrix) <= 1e-12);
  }

  CHECK_THROWS_AS(core::partial_transpose(abc.matrix, split22, 0), DimensionError);
  CHECK_THROWS_AS(core::partial_transpose(abc.matrix, split23, 2), DimensionError);
}

TEST_CASE("param_to_density: degenerate rule, rank-1, invariants") {
  const RealVector zeros = RealVector::Zero(4);
  const DensityOperator mixed = core::param_to_density(zeros, 2);
  CHECK(core::max_abs(mixed.matrix - 0.5 * eye(2)) <= 1e-15);

  RealVector rank1 = RealVector::Zero(4);
  rank1(0) = 1.0;  // L = diag(1, 0)
  const DensityOperator zero_state = core::param_to_density(rank1, 2);
  Matrix proj0 = Matrix::Zero(2, 2);
  proj0(0, 0) = 1.0;
  CHECK(core::max_abs(zero_state.matrix - proj0) <= 1e-15);

  Rng rng(31, 0);
  for (int t = 0; t < 20; ++t) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 2);
    RealVector params(d * d);
    for (int i = 0; i < params.size(); ++i) params(i) = rng.gaussian();
    const DensityOperator out = core::param_to_density(params, d);
    CHECK(core::hermiticity_deviation(out.matrix) <= 1e-12);
    CHECK(std::abs(out.matrix.trace().real() - 1.0) <= 1e-12);
    const RealVector vals = core::eigvals_hermitian(out.matrix);
    CHECK(vals(vals.size() - 1) >= -1e-9);
  }

  CHECK_THROWS_AS(core::param_to_density(RealVector::Zero(3), 2), DimensionError);
}

TEST_CASE("param_to_measurement: unitary case, projector case, completeness") {
  Rng rng(37, 0);

  // k=1: any invertible raw matrix normalizes to a unitary.
  RealVector one(8);
  for (int i = 0; i < 8; ++i) one(i) = rng.gaussian();
  const measures::MeasurementKrausSet single = core::param_to_measurement(one, 2, 1);
  CHECK(core::max_abs(single.kraus[0].adjoint() * single.kraus[0] - eye(2)) <= 1e-9);

  // k=2 with raw basis projectors: already complete, reproduced exactly.
  RealVector proj_params = RealVector::Zero(16);
  proj_params(0) = 1.0;   // A_0 = |0><0| (entry (0,0) real part)
  proj_params(14) = 1.0;  // A_1 = |1><1| (entry (1,1) real part)
  const measures::MeasurementKrausSet projs = core::param_to_measurement(proj_params, 2, 2);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(core::max_abs(projs.kraus[0] - p0) <= 1e-9);
  CHECK(core::max_abs(projs.kraus[1] - p1) <= 1e-9);

  for (int t = 0; t < 20; ++t) {
    const int dim = 2 + static_cast<int>(rng.next_u64() % 2);
    const int k = 1 + static_cast<int>(rng.next_u64() % 4);
    RealVector params(2 * k * dim * dim);
    for (int i = 0; i < params.size(); ++i) params(i) = rng.gaussian();
    CHECK(measures::completeness_residual(core::param_to_measurement(params, dim, k)) <=
          1e-9);
  }

  // Near-singular Gram regularization keeps the chart total (finite output,
  // no throw), and above the regularization floor the chart is scale-free.
  const measures::MeasurementKrausSet degenerate =
      core::param_to_measurement(RealVector::Zero(16), 2, 2);
  REQUIRE(degenerate.kraus.size() == 2);
  for (const auto& p : degenerate.kraus) CHECK(p.allFinite());
  RealVector generic(16);
  for (int i = 0; i < 16; ++i) generic(i) = rng.gaussian();
  const measures::MeasurementKrausSet at_scale = core::param_to_measurement(generic, 2, 2);
  const measures::MeasurementKrausSet rescaled =
      core::param_to_measurement(RealVector(1e-3 * generic), 2, 2);
  for (int i = 0; i < 2; ++i)
    CHECK(core::max_abs(at_scale.kraus[i] - rescaled.kraus[i]) <= 1e-9);

  CHECK_THROWS_AS(core::param_to_measurement(RealVector::Zero(7), 2, 1), DimensionError);
}

TEST_CASE("param_to_ensemble: weights, fallback, state chart reuse") {
  const int n = 2, d = 2;
  RealVector params = RealVector::Zero(core::ensemble_param_count(d, n));
  params(0) = 1.0;  // weights 1², 0² → (1, 0)
  params(2) = 1.0;  // first state chart: L = diag(1,0) → |0><0|
  const core::Ensemble ens = core::param_to_ensemble(params, d, n);
  CHECK(ens.probabilities[0] == doctest::Approx(1.0));
  CHECK(ens.probabilities[1] == doctest::Approx(0.0));
  Matrix proj0 = Matrix::Zero(2, 2);
  proj0(0, 0) = 1.0;
  CHECK(core::max_abs(ens.states[0].matrix - proj0) <= 1e-15);
  // all-zero weights fall back to uniform; all-zero state chart to I/d
  const core::Ensemble uniform =
      core::param_to_ensemble(RealVector::Zero(core::ensemble_param_count(d, n)), d, n);
  CHECK(uniform.probabilities[0] == doctest::Approx(0.5));
  CHECK(core::max_abs(uniform.states[1].matrix - 0.5 * eye(2)) <= 1e-15);

  CHECK_THROWS_AS(core::param_to_ensemble(RealVector::Zero(5), 2, 2), DimensionError);
}

TEST_CASE("trace_distance: coincidence, orthogonal, half-mixed") {
  Rng rng(41, 0);
  const DensityOperator rho = core::random_density(3, rng);
  CHECK(core::trace_distance(rho.matrix, rho.matrix) <= 1e-12);

  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(std::abs(core::trace_distance(p0, p1) - 1.0) <= 1e-12);
  CHECK(std::abs(core::trace_distance(p0, Matrix(0.5 * eye(2))) - 0.5) <= 1e-12);

  const DensityOperator sigma = core::random_density(3, rng);
  CHECK(std::abs(core::trace_distance(rho.matrix, sigma.matrix) -
                 core::trace_distance(sigma.matrix, rho.matrix)) <= 1e-12);
  CHECK_THROWS_AS(core::trace_distance(p0, Matrix(eye(3))), DimensionError);
}

TEST_CASE("make_density / make_pure: invariant enforcement") {
  Matrix not_herm = Matrix::Zero(2, 2);
  not_herm(0, 0) = 0.5;
  not_herm(1, 1) = 0.5;
  not_herm(0, 1) = 0.1;
  CHECK_THROWS_AS(core::make_density(not_herm), ValidationError);

  CHECK_THROWS_AS(core::make_density(Matrix(eye(2))), ValidationError);  // trace 2

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(core::make_density(neg), ValidationError);

  CHECK_THROWS_AS(core::make_pure(Vector(2.0 * basis(2, 0))), ValidationError);
  CHECK(core::make_density(Matrix(0.5 * eye(2))).dim == 2);
}

TEST_CASE("bloch_density: center, poles, clamping") {
  CHECK(core::max_abs(core::bloch_density(0.0, 0.0, 0.0).matrix - 0.5 * eye(2)) <= 1e-15);

  Matrix proj0 = Matrix::Zero(2, 2);
  proj0(0, 0) = 1.0;
  CHECK(core::max_abs(core::bloch_density(1.0, 0.0, 0.7).matrix - proj0) <= 1e-12);

  const DensityOperator clamped = core::bloch_density(1.7, 1.1, 2.2);
  const RealVector vals = core::eigvals_hermitian(clamped.matrix);
  CHECK(vals(vals.size() - 1) >= -1e-12);
  CHECK(std::abs(clamped.matrix.trace().real() - 1.0) <= 1e-12);
}

TEST_CASE("DimensionSplit: totals and labels") {
  const DimensionSplit split = DimensionSplit::bipartite(2, 3, "B", "E");
  CHECK(split.total() == 6);
  CHECK(split.labels[0] == "B");
  CHECK(split.labels[1] == "E");
  CHECK_THROWS_AS(split.require_total(5), DimensionError);
  CHECK_NOTHROW(split.require_total(6));
}
