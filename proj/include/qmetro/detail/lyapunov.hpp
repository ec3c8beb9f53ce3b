#pragma once

#include <Eigen/Dense>

namespace qmetro::detail {

/// Solves X rho + rho X = 2 rhs for Hermitian X on the support of rho:
/// in the eigenbasis of rho, X_jk = 2 <j|rhs|k> / (lambda_j + lambda_k)
/// wherever the eigenvalue sum exceeds eps_supp, zero elsewhere. Throws
/// NumericalError when |<j|rhs|k>| > leak_tol on an excluded pair, i.e. when
/// the right-hand side leaks outside the support.
Eigen::MatrixXcd lyapunov_solve_on_support(const Eigen::MatrixXcd& rho,
                                           const Eigen::MatrixXcd& rhs,
                                           double eps_supp, double leak_tol,
                                           const char* what);

}  // namespace qmetro::detail
