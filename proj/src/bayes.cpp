#include "qmetro/bayes.hpp"

#include <algorithm>
#include <cmath>

#include "qmetro/detail/lyapunov.hpp"

namespace qmetro {

// ---------------------------------------------------------------------------
// Prior
// ---------------------------------------------------------------------------

Prior Prior::flat(double center, double width, int nodes) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw ValidationError("Prior::flat: width must be finite and > 0");
  if (nodes < 2) throw ValidationError("Prior: need at least two quadrature nodes");

  Prior p;
  p.lo_ = center - 0.5 * width;
  p.hi_ = center + 0.5 * width;
  p.flat_ = true;
  p.flat_density_ = 1.0 / width;
  p.rule_ = "gauss-legendre";
  p.measure_ = gauss_legendre(nodes, p.lo_, p.hi_);
  for (auto& q : p.measure_) q.w *= p.flat_density_;
  p.mean_ = center;
  p.variance_ = width * width / 12.0;
  return p;
}

Prior Prior::tabulated(double a, double b, std::vector<double> density_samples, int nodes) {
  if (!(b > a)) throw ValidationError("Prior::tabulated: empty support");
  if (density_samples.size() < 2)
    throw ValidationError("Prior::tabulated: need at least two density samples");
  if (nodes < 2) throw ValidationError("Prior: need at least two quadrature nodes");
  for (double v : density_samples)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("Prior::tabulated: density samples must be finite and >= 0");

  Prior p;
  p.lo_ = a;
  p.hi_ = b;
  p.flat_ = false;
  p.samples_ = std::move(density_samples);
  p.rule_ = "gauss-legendre-composite";

  // One Gauss-Legendre panel per sample interval; the density is linear on
  // each panel, so low panel orders already integrate the moments exactly.
  const int panels = int(p.samples_.size()) - 1;
  const int order = std::max(2, (nodes + panels - 1) / panels);
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const auto panel = gauss_legendre(order, a + k * h, a + (k + 1) * h);
    for (const auto& q : panel) p.measure_.push_back({q.x, q.w * p.density(q.x)});
  }

  double total = 0.0;
  for (const auto& q : p.measure_) total += q.w;
  if (!(total > 0.0))
    throw ValidationError("Prior::tabulated: density integrates to zero");
  const double inv = 1.0 / total;
  for (auto& s : p.samples_) s *= inv;
  for (auto& q : p.measure_) q.w *= inv;

  double m1 = 0.0, m2 = 0.0;
  for (const auto& q : p.measure_) {
    m1 += q.w * q.x;
    m2 += q.w * q.x * q.x;
  }
  p.mean_ = m1;
  p.variance_ = m2 - m1 * m1;
  return p;
}

double Prior::density(double phi) const {
  if (phi < lo_ || phi > hi_) return 0.0;
  if (flat_) return flat_density_;
  const int panels = int(samples_.size()) - 1;
  const double t = (phi - lo_) / (hi_ - lo_) * panels;
  const int k = std::min(int(t), panels - 1);
  const double frac = t - k;
  return samples_[k] * (1.0 - frac) + samples_[k + 1] * frac;
}

PriorMoments prior_moments(const Prior& prior) { return {prior.mean(), prior.variance()}; }

// ---------------------------------------------------------------------------
// Prior-averaged operators
// ---------------------------------------------------------------------------

AveragedStates averaged_states(const State& s, const Prior& prior) {
  if (prior.node_count() < 2)
    throw ValidationError("averaged_states: need at least two quadrature nodes");

  const double center = prior.mean();
  const DensityOperator base = encode_phase(as_density(s), center);
  const int nm = base.n_max();

  EntryMap zeroth, first;
  for (const auto& q : prior.measure()) {
    const double u = q.x - center;
    const DensityOperator rho_u = encode_phase(base, u);
    for (const auto& [key, v] : rho_u.matrix().upper_entries()) {
      zeroth[key] += q.w * v;
      first[key] += q.w * u * v;
    }
  }

  HermitianOperator rho_bar = HermitianOperator::from_entries(zeroth, nm);
  const double tr = rho_bar.trace();
  if (std::abs(tr - 1.0) > 1e-9)
    throw NumericalError("averaged_states: quadrature trace " + std::to_string(tr));

  // Shift the first moment back to the uncentered variable.
  HermitianOperator rho_prime = HermitianOperator::from_entries(first, nm);
  if (center != 0.0)
    for (const auto& [key, v] : rho_bar.upper_entries())
      rho_prime.add_entry(key.first, key.second, center * v);

  rho_prime.prune();
  return {density_unchecked(std::move(rho_bar)), std::move(rho_prime)};
}

AveragedStates averaged_states(const StateSpec& spec, const Prior& prior) {
  return averaged_states(make_state(spec), prior);
}

HermitianOperator personick_estimator(const DensityOperator& rho_bar,
                                      const HermitianOperator& rho_prime,
                                      const SolverOptions& opt) {
  if (rho_bar.n_max() != rho_prime.n_max())
    throw ValidationError("personick_estimator: truncations differ");
  const Eigen::MatrixXcd s = detail::lyapunov_solve_on_support(
      rho_bar.to_dense(), rho_prime.to_dense(), opt.eps_supp, opt.leak_tol,
      "Personick estimator");
  return HermitianOperator::from_dense(s, rho_bar.n_max());
}

std::vector<double> estimator_estimates(const HermitianOperator& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.to_dense(), Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

// ---------------------------------------------------------------------------
// Metrological power
// ---------------------------------------------------------------------------

BayesResult metrological_power(const State& s, const Prior& prior,
                               const SolverOptions& opt) {
  const auto avg = averaged_states(s, prior);
  HermitianOperator estimator = personick_estimator(avg.rho_bar, avg.rho_prime, opt);

  const Eigen::MatrixXcd rb = avg.rho_bar.to_dense();
  const Eigen::MatrixXcd sd = estimator.to_dense();
  const double tr_s = (rb * sd).trace().real();
  const double tr_s2 = (rb * sd * sd).trace().real();

  const auto [mean, sigma0_sq] = prior_moments(prior);
  if (prior.is_flat() && mean == 0.0 && std::abs(tr_s) > 1e-10)
    throw NumericalError("metrological_power: Tr(rho_bar S) = " + std::to_string(tr_s) +
                         " for a centered flat prior");

  BayesResult out{0.0, 0.0, sigma0_sq, prior.wide(), std::move(estimator)};
  out.power = (tr_s2 - tr_s * tr_s) / (sigma0_sq * sigma0_sq);
  // Prior second moment minus Tr(rho_bar S^2).
  out.optimal_error = (sigma0_sq + mean * mean) - tr_s2;
  return out;
}

BayesResult metrological_power(const StateSpec& spec, const Prior& prior,
                               const SolverOptions& opt) {
  return metrological_power(make_state(spec), prior, opt);
}

double kappa(double x) {
  const double ax = std::abs(x);
  if (ax <= 1e-3) {
    // Series branch: the closed form loses six digits to cancellation here.
    const double x2 = x * x;
    return 1.0 - x2 / 5.0 + 3.0 * x2 * x2 / 175.0;
  }
  const double f = x * std::cos(x) - std::sin(x);
  const double x3 = x * x * x;
  return 9.0 * f * f / (x3 * x3);
}

double closed_form_power(int n, double alpha, double beta, double width) {
  if (n < 1) throw ValidationError("closed_form_power: N must be a positive integer");
  if (alpha < 0.0 || beta < 0.0 || alpha + beta > 1.0 + 1e-15)
    throw ValidationError("closed_form_power: invalid mixture weights");
  if (!(width > 0.0)) throw ValidationError("closed_form_power: width must be > 0");
  return kappa(0.5 * n * width) * beta * double(n) * double(n);
}

double conditioned_power(const StateSpec& spec, const Prior& prior,
                         const SolverOptions& opt) {
  const State s = make_state(spec);
  const double p_detect = 1.0 - vacuum_probability(s);
  if (p_detect <= 1e-15)
    throw NumericalError("conditioned_power: undefined conditioning, detection probability is 0");
  return metrological_power(s, prior, opt).power / p_detect;
}

}  // namespace qmetro
