#include "qcap/states.hpp"

#include <algorithm>
#include <complex>
#include <numeric>
#include <sstream>

namespace qcap::core {

int DimensionSplit::total() const {
  int t = 1;
  for (int f : factors) t *= f;
  return t;
}

void DimensionSplit::require_total(int dim) const {
  if (total() != dim) {
    std::ostringstream msg;
    msg << "dimension split (";
    for (size_t i = 0; i < factors.size(); ++i) msg << (i ? "," : "") << factors[i];
    msg << ") does not multiply to operator dimension " << dim;
    throw DimensionError(msg.str());
  }
}

DimensionSplit DimensionSplit::bipartite(int a, int b, const std::string& label_a,
                                         const std::string& label_b) {
  return DimensionSplit{{a, b}, {label_a, label_b}};
}

DensityOperator make_density(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("density operator must be square");
  const double herm = hermiticity_deviation(m);
  if (herm > 1e-9) {
    std::ostringstream msg;
    msg << "density operator not Hermitian: deviation " << herm;
    throw ValidationError(msg.str());
  }
  const double trace_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_err > 1e-9) {
    std::ostringstream msg;
    msg << "density operator trace off by " << trace_err;
    throw ValidationError(msg.str());
  }
  const RealVector vals = eigvals_hermitian(m);
  const double min_eig = vals(vals.size() - 1);
  if (min_eig < -1e-9) {
    std::ostringstream msg;
    msg << "density operator has eigenvalue " << min_eig << " below -1e-9";
    throw ValidationError(msg.str());
  }
  return DensityOperator{static_cast<int>(m.rows()), m};
}

DensityOperator density_unchecked(const Matrix& m) {
  return DensityOperator{static_cast<int>(m.rows()), m};
}

PureState make_pure(const Vector& v) {
  const double norm_err = std::abs(v.norm() - 1.0);
  if (norm_err > 1e-9) {
    std::ostringstream msg;
    msg << "pure state norm off by " << norm_err;
    throw ValidationError(msg.str());
  }
  return PureState{static_cast<int>(v.size()), v};
}

DensityOperator projector(const PureState& psi) {
  return density_unchecked(psi.amplitudes * psi.amplitudes.adjoint());
}

namespace {

// Row/column strides of each factor in the flattened index (first factor
// slowest).
std::vector<int> factor_strides(const std::vector<int>& factors) {
  std::vector<int> strides(factors.size());
  int s = 1;
  for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
    strides[i] = s;
    s *= factors[i];
  }
  return strides;
}

}  // namespace

Matrix partial_trace(const Matrix& m, const DimensionSplit& split,
                     const std::vector<int>& keep) {
  split.require_total(static_cast<int>(m.rows()));
  if (m.rows() != m.cols()) throw DimensionError("partial_trace: matrix not square");
  const int n_factors = static_cast<int>(split.factors.size());
  for (int k : keep)
    if (k < 0 || k >= n_factors) throw DimensionError("partial_trace: bad subsystem index");

  std::vector<int> traced;
  for (int i = 0; i < n_factors; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end()) traced.push_back(i);

  const std::vector<int> strides = factor_strides(split.factors);
  int keep_dim = 1, traced_dim = 1;
  for (int k : keep) keep_dim *= split.factors[k];
  for (int t : traced) traced_dim *= split.factors[t];

  // Enumerate kept multi-indices (row-major over `keep` order, which is the
  // original factor order when keep is sorted) and sum over traced ones.
  auto compose = [&](const std::vector<int>& subsystems, int flat_multi,
                     const std::vector<int>& dims) {
    int offset = 0;
    for (int i = static_cast<int>(subsystems.size()) - 1; i >= 0; --i) {
      offset += (flat_multi % dims[i]) * strides[subsystems[i]];
      flat_multi /= dims[i];
    }
    return offset;
  };
  std::vector<int> keep_dims, traced_dims;
  for (int k : keep) keep_dims.push_back(split.factors[k]);
  for (int t : traced) traced_dims.push_back(split.factors[t]);

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (int r = 0; r < keep_dim; ++r) {
    const int row_base = compose(keep, r, keep_dims);
    for (int c = 0; c < keep_dim; ++c) {
      const int col_base = compose(keep, c, keep_dims);
      Complex sum(0.0, 0.0);
      for (int t = 0; t < traced_dim; ++t) {
        const int off = compose(traced, t, traced_dims);
        sum += m(row_base + off, col_base + off);
      }
      out(r, c) = sum;
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho, const DimensionSplit& split,
                              const std::vector<int>& keep) {
  return density_unchecked(partial_trace(rho.matrix, split, keep));
}

PureState purify(const DensityOperator& rho) {
  const EigenSystem es = eig_hermitian(rho.matrix);
  const int d = rho.dim;
  Vector psi = Vector::Zero(d * d);
  for (int k = 0; k < d; ++k) {
    const double lam = std::max(0.0, es.values(k));
    if (lam <= 0.0) continue;
    // |psi> += sqrt(λ_k) |v_k>_system ⊗ |k>_ancilla
    for (int i = 0; i < d; ++i) psi(i * d + k) += std::sqrt(lam) * es.vectors(i, k);
  }
  psi /= psi.norm();
  return PureState{d * d, psi};
}

SchmidtDecomposition schmidt_decompose(const PureState& psi, const DimensionSplit& split) {
  if (split.factors.size() != 2)
    throw DimensionError("schmidt_decompose: split must have exactly two factors");
  split.require_total(psi.dim);
  const int da = split.factors[0], db = split.factors[1];
  Matrix amp(da, db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) amp(i, j) = psi.amplitudes(i * db + j);
  Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues();  // Eigen returns descending
  out.left = svd.matrixU();
  out.right = svd.matrixV().conjugate();
  return out;
}

Matrix partial_transpose(const Matrix& m, const DimensionSplit& split, int subsystem) {
  split.require_total(static_cast<int>(m.rows()));
  if (subsystem < 0 || subsystem >= static_cast<int>(split.factors.size()))
    throw DimensionError("partial_transpose: bad subsystem index");
  const std::vector<int> strides = factor_strides(split.factors);
  const int dim = static_cast<int>(m.rows());
  const int d_t = split.factors[subsystem];
  const int stride = strides[subsystem];

  auto index_of = [&](int flat) { return (flat / stride) % d_t; };
  Matrix out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      // Swap the `subsystem` component of the row and column indices.
      const int ri = index_of(r), ci = index_of(c);
      const int r2 = r + (ci - ri) * stride;
      const int c2 = c + (ri - ci) * stride;
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

double trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("trace_distance: dimension mismatch");
  const RealVector vals = eigvals_hermitian(a - b);
  return 0.5 * vals.cwiseAbs().sum();
}

DensityOperator bloch_density(double r, double theta, double phi) {
  r = std::clamp(r, 0.0, 1.0);
  const double x = r * std::sin(theta) * std::cos(phi);
  const double y = r * std::sin(theta) * std::sin(phi);
  const double z = r * std::cos(theta);
  Matrix m(2, 2);
  m(0, 0) = Complex(0.5 * (1.0 + z), 0.0);
  m(1, 1) = Complex(0.5 * (1.0 - z), 0.0);
  m(0, 1) = Complex(0.5 * x, -0.5 * y);
  m(1, 0) = Complex(0.5 * x, 0.5 * y);
  return DensityOperator{2, std::move(m)};
}

DensityOperator random_density(int dim, Rng& rng) {
  // Hilbert-Schmidt-ish: GG†/tr with complex Gaussian G.
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityOperator{dim, std::move(m)};
}

PureState random_pure(int dim, Rng& rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  v /= v.norm();
  return PureState{dim, std::move(v)};
}

}  // namespace qcap::core
