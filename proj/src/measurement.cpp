#include "qcap/measurement.hpp"

#include <sstream>

#include "qcap/errors.hpp"

namespace qcap::measures {

using core::Complex;
using core::Matrix;

double completeness_residual(const MeasurementKrausSet& m) {
  Matrix sum = Matrix::Zero(m.dim, m.dim);
  for (const Matrix& p : m.kraus) sum += p.adjoint() * p;
  return core::max_abs(sum - Matrix::Identity(m.dim, m.dim));
}

MeasurementKrausSet make_measurement(int dim, std::vector<Matrix> kraus,
                                     const std::string& name) {
  if (kraus.empty()) throw ValidationError("measurement needs at least one operator");
  for (size_t i = 0; i < kraus.size(); ++i) {
    if (kraus[i].rows() != dim || kraus[i].cols() != dim) {
      std::ostringstream msg;
      msg << "measurement operator " << i << " is " << kraus[i].rows() << "x"
          << kraus[i].cols() << ", expected " << dim << "x" << dim;
      throw DimensionError(msg.str());
    }
  }
  MeasurementKrausSet m{dim, std::move(kraus), name};
  const double residual = completeness_residual(m);
  if (residual > 1e-9) {
    std::ostringstream msg;
    msg << "measurement set incomplete: residual " << residual;
    throw ValidationError(msg.str());
  }
  return m;
}

MeasurementKrausSet trivial_measurement(int dim) {
  return MeasurementKrausSet{dim, {Matrix::Identity(dim, dim)}, "trivial"};
}

MeasurementKrausSet computational_measurement(int dim) {
  std::vector<Matrix> ops;
  ops.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    Matrix p = Matrix::Zero(dim, dim);
    p(i, i) = Complex(1.0, 0.0);
    ops.push_back(std::move(p));
  }
  return MeasurementKrausSet{dim, std::move(ops), "computational"};
}

MeasurementKrausSet fig2_measurement(int x) {
  if (x < 1) throw ValidationError("fig2 measurement: x must be positive");
  Matrix p0 = Matrix::Zero(2, 2);
  p0(1, 1) = Complex(0.5, 0.0);
  Matrix p1 = Matrix::Constant(2, 2, Complex(1.0 / x, 0.0));
  const Matrix rest =
      Matrix::Identity(2, 2) - p0.adjoint() * p0 - p1.adjoint() * p1;
  const core::RealVector vals = core::eigvals_hermitian(rest);
  if (vals(vals.size() - 1) < -1e-12) {
    std::ostringstream msg;
    msg << "fig2 measurement: remainder not positive semidefinite for x = " << x
        << " (min eigenvalue " << vals(vals.size() - 1) << ")";
    throw ValidationError(msg.str());
  }
  Matrix p2 = core::sqrt_psd(rest);
  std::ostringstream name;
  name << "fig2-x" << x;
  return MeasurementKrausSet{2, {std::move(p0), std::move(p1), std::move(p2)}, name.str()};
}

}  // namespace qcap::measures
