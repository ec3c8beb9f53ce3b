#include "qmetro/detail/lyapunov.hpp"

#include <cmath>
#include <string>

#include "qmetro/errors.hpp"

namespace qmetro::detail {

Eigen::MatrixXcd lyapunov_solve_on_support(const Eigen::MatrixXcd& rho,
                                           const Eigen::MatrixXcd& rhs,
                                           double eps_supp, double leak_tol,
                                           const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalError(std::string(what) + ": eigendecomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXcd& v = es.eigenvectors();

  const Eigen::MatrixXcd r = v.adjoint() * rhs * v;
  const auto n = rho.rows();
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double denom = lam(j) + lam(k);
      if (denom > eps_supp) {
        x(j, k) = 2.0 * r(j, k) / denom;
      } else if (std::abs(r(j, k)) > leak_tol) {
        throw NumericalError(std::string(what) +
                             ": ill-defined, right-hand side of magnitude " +
                             std::to_string(std::abs(r(j, k))) +
                             " outside the state's support");
      }
    }
  }
  return v * x * v.adjoint();
}

}  // namespace qmetro::detail
