#include "qcap/channels.hpp"

#include <cmath>
#include <sstream>

namespace qcap::channels {

using core::Complex;
using core::Rng;

ValidationReport validate(const QuantumChannel& T) {
  Matrix sum = Matrix::Zero(T.d_in, T.d_in);
  for (const Matrix& k : T.kraus) sum += k.adjoint() * k;
  const double residual = core::max_abs(sum - Matrix::Identity(T.d_in, T.d_in));
  return ValidationReport{residual, residual <= 1e-9};
}

QuantumChannel make_channel(int d_in, int d_out, std::vector<Matrix> kraus,
                            const std::string& name) {
  if (d_in < 1 || d_out < 1) throw DimensionError("channel dimensions must be positive");
  if (kraus.empty()) throw ValidationError("channel needs at least one Kraus operator");
  for (size_t i = 0; i < kraus.size(); ++i) {
    if (kraus[i].rows() != d_out || kraus[i].cols() != d_in) {
      std::ostringstream msg;
      msg << "Kraus operator " << i << " is " << kraus[i].rows() << "x" << kraus[i].cols()
          << ", expected " << d_out << "x" << d_in;
      throw DimensionError(msg.str());
    }
  }
  QuantumChannel T{d_in, d_out, std::move(kraus), name};
  const ValidationReport report = validate(T);
  if (!report.pass) {
    std::ostringstream msg;
    msg << "channel '" << name << "' not trace preserving: completeness residual "
        << report.completeness_residual;
    throw ValidationError(msg.str());
  }
  return T;
}

Matrix apply_raw(const QuantumChannel& T, const Matrix& rho) {
  Matrix out = Matrix::Zero(T.d_out, T.d_out);
  for (const Matrix& k : T.kraus) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityOperator apply(const QuantumChannel& T, const DensityOperator& rho) {
  if (rho.dim != T.d_in) {
    std::ostringstream msg;
    msg << "apply: channel expects dimension " << T.d_in << ", state has " << rho.dim;
    throw DimensionError(msg.str());
  }
  return core::density_unchecked(apply_raw(T, rho.matrix));
}

StinespringIsometry dilate(const QuantumChannel& T) {
  const ValidationReport report = validate(T);
  if (!report.pass) {
    std::ostringstream msg;
    msg << "dilate: channel not trace preserving (residual " << report.completeness_residual
        << ")";
    throw ValidationError(msg.str());
  }
  const int d_env = static_cast<int>(T.kraus.size());
  Matrix U = Matrix::Zero(T.d_out * d_env, T.d_in);
  // Component (b, e) of U|ψ> is (K_e|ψ>)_b, with B the slow index.
  for (int e = 0; e < d_env; ++e)
    for (int b = 0; b < T.d_out; ++b) U.row(b * d_env + e) = T.kraus[e].row(b);
  return StinespringIsometry{T.d_in, T.d_out, d_env, std::move(U)};
}

Matrix joint_output_raw(const StinespringIsometry& U, const Matrix& rho) {
  return U.matrix * rho * U.matrix.adjoint();
}

JointOutput joint_output(const QuantumChannel& T, const DensityOperator& rho) {
  if (rho.dim != T.d_in) {
    std::ostringstream msg;
    msg << "joint_output: channel expects dimension " << T.d_in << ", state has "
        << rho.dim;
    throw DimensionError(msg.str());
  }
  const StinespringIsometry U = dilate(T);
  return JointOutput{core::density_unchecked(joint_output_raw(U, rho.matrix)),
                     DimensionSplit{{U.d_out, U.d_env}, {"B", "E"}}};
}

QuantumChannel complementary(const QuantumChannel& T) {
  const StinespringIsometry U = dilate(T);
  // tr_B(UρU†) has Kraus operators M_b with M_b[e, a] = K_e[b, a].
  std::vector<Matrix> kraus(T.d_out);
  for (int b = 0; b < T.d_out; ++b) {
    kraus[b].resize(U.d_env, T.d_in);
    for (int e = 0; e < U.d_env; ++e) kraus[b].row(e) = T.kraus[e].row(b);
  }
  return QuantumChannel{T.d_in, U.d_env, std::move(kraus), T.name + "-complementary"};
}

QuantumChannel amplitude_damping(double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("amplitude_damping: p must be in [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 1) = Complex(std::sqrt(p), 0.0);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 0) = Complex(1.0, 0.0);
  k1(1, 1) = Complex(std::sqrt(1.0 - p), 0.0);
  return QuantumChannel{2, 2, {std::move(k0), std::move(k1)}, "amplitude-damping"};
}

QuantumChannel depolarizing(double q) {
  if (q < 0.0 || q > 1.0) throw ValidationError("depolarizing: q must be in [0, 1]");
  // (1-q)ρ + q·I/2 through the four Pauli Kraus operators.
  const double w0 = std::sqrt(1.0 - 0.75 * q), w = std::sqrt(0.25 * q);
  Matrix id = Matrix::Identity(2, 2);
  Matrix x = Matrix::Zero(2, 2), y = Matrix::Zero(2, 2), z = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = Complex(1.0, 0.0);
  y(0, 1) = Complex(0.0, -1.0);
  y(1, 0) = Complex(0.0, 1.0);
  z(0, 0) = Complex(1.0, 0.0);
  z(1, 1) = Complex(-1.0, 0.0);
  return QuantumChannel{2, 2, {w0 * id, w * x, w * y, w * z}, "depolarizing"};
}

QuantumChannel dephasing(double q) {
  if (q < 0.0 || q > 1.0) throw ValidationError("dephasing: q must be in [0, 1]");
  Matrix id = Matrix::Identity(2, 2);
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = Complex(1.0, 0.0);
  z(1, 1) = Complex(-1.0, 0.0);
  return QuantumChannel{2, 2, {std::sqrt(1.0 - 0.5 * q) * id, std::sqrt(0.5 * q) * z},
                        "dephasing"};
}

QuantumChannel identity_channel(int d) {
  if (d < 1) throw DimensionError("identity: dimension must be positive");
  return QuantumChannel{d, d, {Matrix::Identity(d, d)}, "identity"};
}

QuantumChannel channel_zoo(const std::string& name, double param) {
  std::string n = name;
  for (char& c : n)
    if (c == '_') c = '-';
  if (n == "amplitude-damping") return amplitude_damping(param);
  if (n == "depolarizing") return depolarizing(param);
  if (n == "dephasing") return dephasing(param);
  if (n == "identity") {
    const int d = static_cast<int>(param);
    if (static_cast<double>(d) != param)
      throw ValidationError("identity: dimension parameter must be an integer");
    return identity_channel(d);
  }
  throw ValidationError("unknown channel name '" + name + "'");
}

QuantumChannel random_channel(int d_in, int d_out, int n_kraus, Rng& rng) {
  if (d_in < 1 || d_out < 1 || n_kraus < 1)
    throw DimensionError("random_channel: dimensions and Kraus count must be positive");
  if (d_out * n_kraus < d_in) {
    std::ostringstream msg;
    msg << "random_channel: d_out*n_kraus = " << d_out * n_kraus
        << " cannot carry an isometry from dimension " << d_in;
    throw DimensionError(msg.str());
  }
  // Thin-QR a complex Gaussian matrix into an exact isometry, then read the
  // Kraus operators off its rows.
  Matrix g(d_out * n_kraus, d_in);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(d_out * n_kraus, d_in);
  std::vector<Matrix> kraus(n_kraus, Matrix::Zero(d_out, d_in));
  for (int e = 0; e < n_kraus; ++e)
    for (int b = 0; b < d_out; ++b) kraus[e].row(b) = q.row(b * n_kraus + e);
  return QuantumChannel{d_in, d_out, std::move(kraus), "random"};
}

}  // namespace qcap::channels
