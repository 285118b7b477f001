#include "qcap/linalg.hpp"

#include <sstream>

namespace qcap::core {

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const Matrix& a) {
  return max_abs(a - a.adjoint());
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

void require_hermitian(const Matrix& h) {
  if (h.rows() != h.cols()) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is " << h.rows() << "x" << h.cols() << ", not square";
    throw DimensionError(msg.str());
  }
  const double dev = hermiticity_deviation(h);
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << "eig_hermitian: Hermiticity deviation " << dev << " exceeds 1e-8";
    throw ValidationError(msg.str());
  }
}

}  // namespace

EigenSystem eig_hermitian(const Matrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()));
  if (solver.info() != Eigen::Success)
    throw ValidationError("eig_hermitian: eigensolver failed to converge");
  // Eigen sorts ascending; flip to descending.
  const Eigen::Index n = h.rows();
  EigenSystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  return out;
}

RealVector eigvals_hermitian(const Matrix& h) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (h + h.adjoint()),
                                               Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ValidationError("eigvals_hermitian: eigensolver failed to converge");
  return solver.eigenvalues().reverse();
}

Matrix sqrt_psd(const Matrix& h) {
  const EigenSystem es = eig_hermitian(h);
  RealVector roots(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    roots(i) = es.values(i) > 0.0 ? std::sqrt(es.values(i)) : 0.0;
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

}  // namespace qcap::core
