#include "qcap/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcap/entropy.hpp"
#include "qcap/params.hpp"

namespace qcap::measures {

using core::Complex;
using core::RealVector;
using core::Vector;

namespace {

void require_be_split(const Eigen::Index rows, const DimensionSplit& split,
                      const MeasurementKrausSet& m) {
  if (split.factors.size() != 2)
    throw DimensionError("conditional entropy needs a two-factor B:E split");
  split.require_total(static_cast<int>(rows));
  if (m.dim != split.factors[1]) {
    std::ostringstream msg;
    msg << "measurement dimension " << m.dim << " does not match the E factor "
        << split.factors[1];
    throw DimensionError(msg.str());
  }
}

}  // namespace

double conditional_entropy_term(const Matrix& rho_be, const DimensionSplit& split,
                                const MeasurementKrausSet& m) {
  require_be_split(rho_be.rows(), split, m);
  const int d_b = split.factors[0];
  const int d_e = split.factors[1];

  // Only Q_i = P_i†P_i enters: tr_E((1⊗P_i)ρ(1⊗P_i)†)[b,b'] = tr(R_{b,b'} Q_i)
  // with R_{b,b'} the (b,b') E-block of ρ.
  double term = 0.0;
  Matrix conditional(d_b, d_b);
  for (const Matrix& p : m.kraus) {
    const Matrix q = p.adjoint() * p;
    for (int b = 0; b < d_b; ++b)
      for (int bp = 0; bp < d_b; ++bp)
        conditional(b, bp) = (rho_be.block(b * d_e, bp * d_e, d_e, d_e) * q).trace();
    const double prob = conditional.trace().real();
    if (prob < 1e-12) continue;
    term += prob * core::von_neumann_entropy(Matrix(conditional / prob));
  }
  return term;
}

double conditional_entropy_term(const channels::JointOutput& joint,
                                const MeasurementKrausSet& m) {
  return conditional_entropy_term(joint.state.matrix, joint.split, m);
}

double c_arrow_fixed(const Matrix& rho_be, const DimensionSplit& split,
                     const MeasurementKrausSet& m) {
  require_be_split(rho_be.rows(), split, m);
  const Matrix rho_b = core::partial_trace(rho_be, split, {0});
  return core::von_neumann_entropy(rho_b) - conditional_entropy_term(rho_be, split, m);
}

double c_arrow_fixed(const channels::JointOutput& joint, const MeasurementKrausSet& m) {
  return c_arrow_fixed(joint.state.matrix, joint.split, m);
}

namespace {

// Embeds a measurement with up to k outcomes into the k-outcome chart: raw
// operators A_i = P_i give G = I, so the chart reproduces the measurement and
// the optimizer's descent property makes the seeded value a floor.
RealVector measurement_to_params(const MeasurementKrausSet& m, int k) {
  const int d = m.dim;
  RealVector params = RealVector::Zero(2 * k * d * d);
  for (int i = 0; i < static_cast<int>(m.kraus.size()); ++i) {
    int base = 2 * i * d * d;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        params(base) = m.kraus[i](r, c).real();
        params(base + 1) = m.kraus[i](r, c).imag();
        base += 2;
      }
  }
  return params;
}

struct CArrowBest {
  double value = 0.0;
  MeasurementKrausSet measurement;
};

CArrowBest c_arrow_optimize_impl(const Matrix& rho_be, const DimensionSplit& split,
                                 int k, const OptimizerConfig& cfg,
                                 const std::vector<MeasurementKrausSet>& seeds,
                                 ExecMode mode) {
  const int d_e = split.factors[1];
  if (k == 1) {
    // A one-outcome complete set is a unitary, which never conditions B:
    // the chart's objective is identically zero.
    MeasurementKrausSet trivial = trivial_measurement(d_e);
    return {c_arrow_fixed(rho_be, split, trivial), std::move(trivial)};
  }

  // Monotonicity in k: the best (k-1)-outcome measurement is recomputed and
  // zero-padded into this chart as a guaranteed restart floor.
  CArrowBest smaller = c_arrow_optimize_impl(rho_be, split, k - 1, cfg, seeds, mode);

  std::vector<RealVector> seed_points;
  seed_points.push_back(measurement_to_params(smaller.measurement, k));
  if (k >= d_e) seed_points.push_back(measurement_to_params(computational_measurement(d_e), k));
  for (const MeasurementKrausSet& s : seeds) {
    if (s.dim != d_e)
      throw DimensionError("c_arrow_optimized: seed measurement dimension mismatch");
    if (static_cast<int>(s.kraus.size()) <= k)
      seed_points.push_back(measurement_to_params(s, k));
  }

  optimize::Objective objective = [&rho_be, &split, d_e, k](const RealVector& x) {
    return c_arrow_fixed(rho_be, split, core::param_to_measurement(x, d_e, k));
  };
  const optimize::OptimizationResult res =
      optimize::maximize(objective, 2 * k * d_e * d_e, cfg, mode, seed_points);
  return {res.best_value, core::param_to_measurement(res.best_params, d_e, k)};
}

}  // namespace

double c_arrow_optimized(const DensityOperator& rho_be, const DimensionSplit& split,
                         int k, const OptimizerConfig& cfg,
                         const std::vector<MeasurementKrausSet>& seeds, ExecMode mode) {
  if (k < 1) throw PreconditionError("c_arrow_optimized: outcome count must be >= 1");
  if (split.factors.size() != 2)
    throw DimensionError("c_arrow_optimized needs a two-factor B:E split");
  split.require_total(rho_be.dim);
  return c_arrow_optimize_impl(rho_be.matrix, split, k, cfg, seeds, mode).value;
}

double concurrence(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw DimensionError("concurrence requires a two-qubit (4x4) state");
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = Complex(-1, 0);
  yy(1, 2) = Complex(1, 0);
  yy(2, 1) = Complex(1, 0);
  yy(3, 0) = Complex(-1, 0);
  const Matrix tilde = yy * rho.conjugate() * yy;
  const Matrix root = core::sqrt_psd(rho);
  const RealVector eigs = core::eigvals_hermitian(root * tilde * root);
  RealVector lambda(4);
  for (int i = 0; i < 4; ++i) lambda(i) = std::sqrt(std::max(0.0, eigs(i)));
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

double eof_two_qubit(const Matrix& rho) {
  const double c = std::min(1.0, concurrence(rho));
  if (c <= 0.0) return 0.0;
  return core::binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

namespace {

// Entanglement entropy of a pure bipartite state (entropy of the A reduction).
double entanglement_entropy(const Vector& psi, int d_a, int d_b) {
  Matrix shaped(d_a, d_b);
  for (int a = 0; a < d_a; ++a)
    for (int b = 0; b < d_b; ++b) shaped(a, b) = psi(a * d_b + b);
  return core::von_neumann_entropy(Matrix(shaped * shaped.adjoint()));
}

}  // namespace

double eof_estimate(const DensityOperator& rho, const DimensionSplit& split,
                    int ensemble_size, const OptimizerConfig& cfg, ExecMode mode) {
  if (split.factors.size() != 2)
    throw DimensionError("eof_estimate needs a two-factor split");
  split.require_total(rho.dim);
  const int d_a = split.factors[0];
  const int d_b = split.factors[1];

  const core::EigenSystem es = core::eig_hermitian(rho.matrix);
  int rank = 0;
  for (int i = 0; i < rho.dim; ++i)
    if (es.values(i) > 1e-10) ++rank;
  rank = std::max(rank, 1);
  if (ensemble_size < rank) {
    std::ostringstream msg;
    msg << "eof_estimate: ensemble_size " << ensemble_size << " is below rank " << rank;
    throw PreconditionError(msg.str());
  }
  if (rank == 1)  // decomposition forced: every ensemble repeats the support state
    return entanglement_entropy(es.vectors.col(0), d_a, d_b);

  Matrix scaled(rho.dim, rank);  // columns √λ_j |v_j>
  for (int j = 0; j < rank; ++j)
    scaled.col(j) = std::sqrt(es.values(j)) * es.vectors.col(j);

  const int m = ensemble_size;
  // Ensembles of m pure states realizing ρ correspond to m×rank isometries W
  // (W†W = I): the unnormalized members are Σ_j W(i,j)·√λ_j|v_j>. Charted by
  // QR of a raw complex matrix.
  optimize::Objective objective = [&scaled, d_a, d_b, m, rank](const RealVector& x) {
    Matrix raw(m, rank);
    int idx = 0;
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < rank; ++c) {
        raw(r, c) = Complex(x(idx), x(idx + 1));
        idx += 2;
      }
    const Matrix w =
        Eigen::HouseholderQR<Matrix>(raw).householderQ() * Matrix::Identity(m, rank);
    double avg = 0.0;
    for (int i = 0; i < m; ++i) {
      Vector member = Vector::Zero(scaled.rows());
      for (int j = 0; j < rank; ++j) member += w(i, j) * scaled.col(j);
      const double p = member.squaredNorm();
      if (p < 1e-12) continue;
      avg += p * entanglement_entropy(Vector(member / std::sqrt(p)), d_a, d_b);
    }
    return avg;
  };

  // Seed with the eigen-ensemble itself (W = [I; 0]).
  RealVector eigen_seed = RealVector::Zero(2 * m * rank);
  for (int j = 0; j < rank; ++j) eigen_seed(2 * (j * rank + j)) = 1.0;
  const optimize::OptimizationResult res =
      optimize::minimize(objective, 2 * m * rank, cfg, mode, {eigen_seed});
  return res.best_value;
}

SeparabilityVerdict ppt_verdict(const Matrix& rho, const DimensionSplit& split) {
  if (split.factors.size() != 2)
    throw DimensionError("ppt_verdict needs a two-factor split");
  split.require_total(static_cast<int>(rho.rows()));
  const int d_a = split.factors[0];
  const int d_b = split.factors[1];
  const RealVector eigs =
      core::eigvals_hermitian(core::partial_transpose(rho, split, 1));
  SeparabilityVerdict out;
  out.witness = eigs(eigs.size() - 1);
  if (out.witness < -1e-9) {
    out.verdict = Separability::Entangled;
  } else if (d_a == 1 || d_b == 1 || d_a * d_b <= 6) {
    out.verdict = Separability::Separable;  // dimensions where PPT is exact
  } else {
    out.verdict = Separability::Indeterminate;
  }
  return out;
}

double koashi_winter_residual(const PureState& psi, const DimensionSplit& split3,
                              const OptimizerConfig& cfg, ExecMode mode) {
  if (split3.factors.size() != 3)
    throw DimensionError("koashi_winter_residual needs a three-factor A:B:C split");
  split3.require_total(psi.dim);
  const int d_a = split3.factors[0];
  const int d_b = split3.factors[1];
  const int d_c = split3.factors[2];

  const Matrix full = core::projector(psi).matrix;
  const double s_a = core::von_neumann_entropy(core::partial_trace(full, split3, {0}));

  const Matrix rho_ab = core::partial_trace(full, split3, {0, 1});
  double eof_ab;
  if (d_a == 2 && d_b == 2) {
    eof_ab = eof_two_qubit(rho_ab);
  } else {
    const DensityOperator ab = core::density_unchecked(rho_ab);
    const core::EigenSystem es = core::eig_hermitian(rho_ab);
    int rank = 0;
    for (int i = 0; i < ab.dim; ++i)
      if (es.values(i) > 1e-10) ++rank;
    eof_ab = eof_estimate(ab, DimensionSplit::bipartite(d_a, d_b), std::max(rank, 1) + 2,
                          cfg, mode);
  }

  const DensityOperator rho_ac =
      core::density_unchecked(core::partial_trace(full, split3, {0, 2}));
  const double c_arrow = c_arrow_optimized(rho_ac, DimensionSplit::bipartite(d_a, d_c),
                                           d_c * d_c, cfg, {}, mode);
  return std::abs(s_a - eof_ab - c_arrow);
}

}  // namespace qcap::measures
