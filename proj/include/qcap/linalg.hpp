#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qcap/errors.hpp"

namespace qcap::core {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest absolute entry.
double max_abs(const Matrix& a);

// max |a - a†|, the Hermiticity deviation.
double hermiticity_deviation(const Matrix& a);

inline Matrix dagger(const Matrix& a) { return a.adjoint(); }

// Kronecker product; the left factor owns the slower-varying index.
Matrix tensor(const Matrix& a, const Matrix& b);

struct EigenSystem {
  RealVector values;  // descending
  Matrix vectors;     // column i pairs with values(i)
};

// Hermitian eigendecomposition with eigenvalues sorted descending.
// Throws ValidationError when the Hermiticity deviation exceeds 1e-8.
EigenSystem eig_hermitian(const Matrix& h);

// Eigenvalues only (descending), same Hermiticity requirement.
RealVector eigvals_hermitian(const Matrix& h);

// Square root of a positive semidefinite operator; eigenvalues within
// arithmetic noise below zero are clamped to zero.
Matrix sqrt_psd(const Matrix& h);

}  // namespace qcap::core
