#include "qcap/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace qcap::core {

namespace {

// Exact power-of-two factors that bring a positive magnitude into [1, 2).
// Split in half so each factor stays representable even when the magnitude
// is denormal (2^1074 would overflow as a single factor).
std::pair<double, double> pow2_rescale(double magnitude) {
  const int e = std::ilogb(magnitude);
  const int h1 = -e / 2;
  const int h2 = -e - h1;
  return {std::ldexp(1.0, h1), std::ldexp(1.0, h2)};
}

}  // namespace

int density_param_count(int d) { return d * d; }

DensityOperator param_to_density(const RealVector& params, int d) {
  if (params.size() != d * d) {
    std::ostringstream msg;
    msg << "param_to_density: expected " << d * d << " parameters, got " << params.size();
    throw DimensionError(msg.str());
  }
  // L: real diagonal from the first d entries, then [re, im] pairs filling
  // the strictly lower triangle row by row.
  Matrix L = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) L(i, i) = Complex(params(i), 0.0);
  int idx = d;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      L(i, j) = Complex(params(idx), params(idx + 1));
      idx += 2;
    }
  const double max_abs = L.cwiseAbs().maxCoeff();
  if (max_abs <= 0.0) {
    // Documented degenerate rule: the all-zero chart point is the maximally
    // mixed state.
    return DensityOperator{d, Matrix::Identity(d, d) / static_cast<double>(d)};
  }
  // The chart is scale-free, but a contracting simplex can shrink the
  // parameters below ~1e-77, where L·L† (and the complex division by its
  // trace) underflows into denormals and quantizes the state; huge
  // parameters overflow the same way. Shift L's exponents so its largest
  // entry lands in [1, 2); power-of-two factors keep the rescale exact.
  const auto [f1, f2] = pow2_rescale(max_abs);
  L *= f1;
  L *= f2;
  Matrix m = L * L.adjoint();
  m *= 1.0 / m.trace().real();  // trace is in [1, 2d^2] after the rescale
  return DensityOperator{d, std::move(m)};
}

measures::MeasurementKrausSet param_to_measurement(const RealVector& params, int dim_e,
                                                   int k) {
  const int expected = 2 * k * dim_e * dim_e;
  if (params.size() != expected) {
    std::ostringstream msg;
    msg << "param_to_measurement: expected " << expected << " parameters, got "
        << params.size();
    throw DimensionError(msg.str());
  }
  std::vector<Matrix> raw(k);
  int idx = 0;
  for (int a = 0; a < k; ++a) {
    raw[a].resize(dim_e, dim_e);
    for (int i = 0; i < dim_e; ++i)
      for (int j = 0; j < dim_e; ++j) {
        raw[a](i, j) = Complex(params(idx), params(idx + 1));
        idx += 2;
      }
  }
  Matrix gram = Matrix::Zero(dim_e, dim_e);
  for (const Matrix& a : raw) gram += a.adjoint() * a;

  // Invert through the eigensystem; a near-singular Gram matrix is
  // regularized by 1e-12·I so the chart stays total.
  EigenSystem es = eig_hermitian(gram);
  if (es.values(es.values.size() - 1) < 1e-12) {
    gram += 1e-12 * Matrix::Identity(dim_e, dim_e);
    es = eig_hermitian(gram);
  }
  RealVector inv_roots(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    inv_roots(i) = 1.0 / std::sqrt(es.values(i));
  const Matrix gram_inv_sqrt = es.vectors * inv_roots.asDiagonal() * es.vectors.adjoint();

  measures::MeasurementKrausSet out;
  out.dim = dim_e;
  out.kraus.reserve(k);
  for (const Matrix& a : raw) out.kraus.push_back(a * gram_inv_sqrt);
  return out;
}

int ensemble_param_count(int d, int n) { return n + n * d * d; }

Ensemble param_to_ensemble(const RealVector& params, int d, int n) {
  if (params.size() != ensemble_param_count(d, n)) {
    std::ostringstream msg;
    msg << "param_to_ensemble: expected " << ensemble_param_count(d, n)
        << " parameters, got " << params.size();
    throw DimensionError(msg.str());
  }
  Ensemble out;
  out.probabilities.resize(n);
  double max_w = 0.0;
  for (int j = 0; j < n; ++j) max_w = std::max(max_w, std::abs(params(j)));
  if (max_w <= 0.0) {
    for (double& pr : out.probabilities) pr = 1.0 / n;
  } else {
    // Same denormal hazard as the density chart: squares of weights below
    // ~1e-162 underflow. Rescale before squaring; the ratio is unchanged.
    const auto [f1, f2] = pow2_rescale(max_w);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double w = (params(j) * f1) * f2;
      out.probabilities[j] = w * w;
      total += out.probabilities[j];
    }
    for (double& pr : out.probabilities) pr /= total;
  }
  out.states.reserve(n);
  const int per_state = d * d;
  for (int j = 0; j < n; ++j)
    out.states.push_back(param_to_density(params.segment(n + j * per_state, per_state), d));
  return out;
}

}  // namespace qcap::core
