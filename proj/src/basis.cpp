#include "inputsafe/basis.hpp"

#include <cmath>
#include <numbers>

namespace inputsafe {

Eigen::VectorXd eval_basis(const BasisSpec& spec, double t) {
  Eigen::VectorXd psi(spec.count);
  const double omega = 2.0 * std::numbers::pi / spec.period;
  psi(0) = 1.0;
  for (int i = 1; i < spec.count; ++i) {
    const int k = (i + 1) / 2;
    psi(i) = (i % 2 == 1) ? std::sin(k * omega * t) : std::cos(k * omega * t);
  }
  return psi;
}

Eigen::VectorXd eval_basis_dot(const BasisSpec& spec, double t) {
  Eigen::VectorXd d(spec.count);
  const double omega = 2.0 * std::numbers::pi / spec.period;
  d(0) = 0.0;
  for (int i = 1; i < spec.count; ++i) {
    const int k = (i + 1) / 2;
    const double kw = k * omega;
    d(i) = (i % 2 == 1) ? kw * std::cos(kw * t) : -kw * std::sin(kw * t);
  }
  return d;
}

}  // namespace inputsafe
