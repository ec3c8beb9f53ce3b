#pragma once

/*
 * Single-shot Bayesian estimation: bounded priors with a quadrature rule,
 * prior-averaged operators, the optimal Hermitian estimator, the
 * metrological-power quantifier and its closed forms for the
 * vacuum/N00N/double-Fock mixture family.
 */

#include <string>
#include <vector>

#include "qmetro/fock.hpp"
#include "qmetro/frequentist.hpp"
#include "qmetro/quadrature.hpp"

namespace qmetro {

/// Normalized phase prior on a bounded interval, together with the
/// quadrature rule used for every integral against it.
class Prior {
 public:
  static Prior flat(double center, double width, int nodes = 200);
  /// Density samples on a uniform grid over [a, b], linearly interpolated
  /// between samples and normalized at construction. Integrals use a
  /// composite Gauss-Legendre rule with panels between samples.
  static Prior tabulated(double a, double b, std::vector<double> density_samples,
                         int nodes = 200);

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  /// Width beyond the validity of the square-error cost; a warning, not an error.
  bool wide() const { return width() > 2.0; }

  double density(double phi) const;
  /// Quadrature nodes with effective weights w_i z(x_i); they sum to one.
  const std::vector<QuadPoint>& measure() const { return measure_; }

  double mean() const { return mean_; }
  double variance() const { return variance_; }

  bool is_flat() const { return flat_; }
  int node_count() const { return int(measure_.size()); }
  const std::string& rule() const { return rule_; }

 private:
  Prior() = default;

  double lo_ = 0.0, hi_ = 0.0;
  bool flat_ = true;
  double flat_density_ = 0.0;
  std::vector<double> samples_;  // tabulated only
  std::vector<QuadPoint> measure_;
  double mean_ = 0.0, variance_ = 0.0;
  std::string rule_;
};

struct PriorMoments {
  double mean;
  double variance;
};

PriorMoments prior_moments(const Prior& prior);

struct AveragedStates {
  DensityOperator rho_bar;       // integral of z(phi) rho(phi)
  HermitianOperator rho_prime;   // integral of z(phi) rho(phi) phi
};

/// Quadrature averages of the phase-encoded state against the prior. The
/// integration runs in the variable centered on the prior mean to limit
/// cancellation; the returned first moment is the uncentered one.
AveragedStates averaged_states(const State& s, const Prior& prior);
AveragedStates averaged_states(const StateSpec& spec, const Prior& prior);

/// Hermitian S solving S rho_bar + rho_bar S = 2 rho_prime on the support of
/// rho_bar. Its eigenvectors are the optimal single-shot measurement and its
/// eigenvalues the optimal estimates.
HermitianOperator personick_estimator(const DensityOperator& rho_bar,
                                      const HermitianOperator& rho_prime,
                                      const SolverOptions& opt = {});

/// Eigenvalues of the estimator, i.e. the optimal phase estimates.
std::vector<double> estimator_estimates(const HermitianOperator& s);

struct BayesResult {
  double power = 0.0;          // P(rho; z)
  double optimal_error = 0.0;  // prior-averaged mean square error of the optimum
  double sigma0_sq = 0.0;      // prior variance
  bool wide_prior = false;
  HermitianOperator estimator;
};

/// P = [Tr(rho_bar S^2) - Tr(rho_bar S)^2] / sigma0^4 and the associated
/// optimal error. For centered flat priors Tr(rho_bar S) = 0 is asserted.
BayesResult metrological_power(const State& s, const Prior& prior,
                               const SolverOptions& opt = {});
BayesResult metrological_power(const StateSpec& spec, const Prior& prior,
                               const SolverOptions& opt = {});

/// kappa(x) = 9 (x cos x - sin x)^2 / x^6, with a series branch near zero;
/// kappa(0) = 1 and kappa maps the reals into [0, 1].
double kappa(double x);

/// Closed-form power kappa(N W / 2) beta N^2 of the mixture family
/// alpha |00><00| + beta |N00N><N00N| + (1-alpha-beta)|NN><NN| under a
/// centered flat prior of width W. Independent of alpha.
double closed_form_power(int n, double alpha, double beta, double width);

/// P divided by the probability of detecting any photon.
double conditioned_power(const StateSpec& spec, const Prior& prior,
                         const SolverOptions& opt = {});

}  // namespace qmetro
