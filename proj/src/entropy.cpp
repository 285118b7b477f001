#include "qcap/entropy.hpp"

#include <cmath>
#include <sstream>

namespace qcap::core {

namespace {

constexpr double kZeroEig = 1e-12;   // eigenvalues below this contribute zero
constexpr double kNegEig = -1e-9;    // below this is an invariant failure
const double kInvLog2 = 1.0 / std::log(2.0);

double entropy_term(double lambda) {
  if (lambda < kNegEig) {
    std::ostringstream msg;
    msg << "von_neumann_entropy: eigenvalue " << lambda << " below -1e-9";
    throw ValidationError(msg.str());
  }
  if (lambda < kZeroEig) return 0.0;
  return -lambda * std::log(lambda) * kInvLog2;
}

}  // namespace

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -(x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x));
}

double von_neumann_entropy(const Matrix& rho) {
  const Eigen::Index d = rho.rows();
  if (d == 1) return entropy_term(rho(0, 0).real());
  if (d == 2) {
    // Closed form: λ = t/2 ± sqrt((a-d)²/4 + |b|²).
    const double a = rho(0, 0).real(), dd = rho(1, 1).real();
    const double mean = 0.5 * (a + dd);
    const double s = std::sqrt(0.25 * (a - dd) * (a - dd) + std::norm(rho(0, 1)));
    return entropy_term(mean + s) + entropy_term(mean - s);
  }
  const RealVector vals = eigvals_hermitian(rho);
  double total = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) total += entropy_term(vals(i));
  return total;
}

}  // namespace qcap::core
