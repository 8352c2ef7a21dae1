#pragma once

#include <Eigen/Core>

namespace inputsafe {

// Truncated Fourier family [1, sin wt, cos wt, sin 2wt, cos 2wt, ...].
struct BasisSpec {
  int count = 1;
  double period = 1.0;
};

Eigen::VectorXd eval_basis(const BasisSpec& spec, double t);
Eigen::VectorXd eval_basis_dot(const BasisSpec& spec, double t);

}  // namespace inputsafe
