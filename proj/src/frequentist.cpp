#include "qmetro/frequentist.hpp"

#include <cmath>
#include <limits>

#include "qmetro/detail/lyapunov.hpp"

namespace qmetro {

std::string to_string(QfiMethod m) {
  switch (m) {
    case QfiMethod::PureVariance: return "pure-variance";
    case QfiMethod::SpectralSld: return "spectral-sld";
    case QfiMethod::ClosedForm: return "closed-form";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Povm
// ---------------------------------------------------------------------------

Povm::Povm(std::vector<HermitianOperator> effects, std::vector<FockIndex> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
  if (effects_.empty()) throw ValidationError("Povm: no effects");
  if (effects_.size() != labels_.size())
    throw ValidationError("Povm: effects and labels differ in length");
  n_max_ = effects_.front().n_max();
  for (const auto& e : effects_)
    if (e.n_max() != n_max_) throw ValidationError("Povm: mixed truncations");

  // Completeness: the effects must sum to the identity.
  const int d = space_dim(n_max_);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& e : effects_) sum += e.to_dense();
  sum -= Eigen::MatrixXcd::Identity(d, d);
  if (sum.cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("Povm: effects do not sum to the identity");
}

void Povm::validate_positivity(double tolerance) const {
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(effects_[i].to_dense(),
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tolerance)
      throw ValidationError("Povm: effect " + std::to_string(i) +
                            " has negative eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()));
  }
}

// ---------------------------------------------------------------------------
// QFI
// ---------------------------------------------------------------------------

namespace {

// First and second moments of n1 - n2 in a pure state.
std::pair<double, double> difference_moments(const PureState& psi) {
  double m1 = 0.0, m2 = 0.0;
  for (const auto& [f, a] : psi.amplitudes()) {
    const double w = std::norm(a);
    const double diff = f.n1 - f.n2;
    m1 += w * diff;
    m2 += w * diff * diff;
  }
  return {m1, m2};
}

}  // namespace

QfiResult qfi_pure(const PureState& psi) {
  const auto [m1, m2] = difference_moments(psi);
  return {m2 - m1 * m1, QfiMethod::PureVariance, std::nullopt};
}

HermitianOperator phase_derivative(const DensityOperator& rho, double phi) {
  const DensityOperator rho_phi = encode_phase(rho, phi);
  HermitianOperator d(rho.n_max());
  // -i [K, rho(phi)]: entrywise -i (k_a - k_b) rho_ab, purely off-diagonal.
  for (const auto& [key, v] : rho_phi.matrix().upper_entries()) {
    const double dk = key.first.k_value() - key.second.k_value();
    if (dk == 0.0) continue;
    d.set_entry(key.first, key.second, Complex{0.0, -dk} * v);
  }
  return d;
}

HermitianOperator sld(const DensityOperator& rho, double phi, const SolverOptions& opt) {
  const DensityOperator rho_phi = encode_phase(rho, phi);
  const Eigen::MatrixXcd l = detail::lyapunov_solve_on_support(
      rho_phi.to_dense(), phase_derivative(rho, phi).to_dense(), opt.eps_supp,
      opt.leak_tol, "SLD");
  return HermitianOperator::from_dense(l, rho.n_max());
}

QfiResult qfi_mixed(const DensityOperator& rho, double phi, const SolverOptions& opt) {
  HermitianOperator l = sld(rho, phi, opt);
  const Eigen::MatrixXcd ld = l.to_dense();
  const double value = (encode_phase(rho, phi).to_dense() * ld * ld).trace().real();
  QfiResult out{std::max(value, 0.0), QfiMethod::SpectralSld, std::move(l)};
  return out;
}

QfiResult qfi(const State& s, const SolverOptions& opt) {
  if (const auto* psi = std::get_if<PureState>(&s)) return qfi_pure(*psi);
  return qfi_mixed(std::get<DensityOperator>(s), 0.0, opt);
}

// ---------------------------------------------------------------------------
// CFI
// ---------------------------------------------------------------------------

CfiResult cfi(const DensityOperator& rho, double phi, const Povm& povm,
              const SolverOptions& opt) {
  if (povm.n_max() != rho.n_max())
    throw ValidationError("cfi: state and POVM truncations differ");
  const Eigen::MatrixXcd rho_d = encode_phase(rho, phi).to_dense();
  const Eigen::MatrixXcd drho_d = phase_derivative(rho, phi).to_dense();

  CfiResult out;
  for (const auto& effect : povm.effects()) {
    const Eigen::MatrixXcd e = effect.to_dense();
    const double p = (e * rho_d).trace().real();
    const double dp = (e * drho_d).trace().real();
    if (p < opt.eps_prob) {
      if (std::abs(dp) >= opt.eps_prob) out.divergent = true;
      continue;
    }
    out.value += dp * dp / p;
  }
  return out;
}

CfiResult cfi(const State& s, double phi, const Povm& povm, const SolverOptions& opt) {
  return cfi(as_density(s), phi, povm, opt);
}

// ---------------------------------------------------------------------------
// Bounds and closed forms
// ---------------------------------------------------------------------------

double convexity_bound(const PureDecomposition& decomp) {
  if (decomp.terms.empty()) throw ValidationError("convexity_bound: empty decomposition");
  double weight_sum = 0.0, bound = 0.0;
  for (const auto& [p, psi] : decomp.terms) {
    if (p < 0.0) throw ValidationError("convexity_bound: negative weight");
    weight_sum += p;
    bound += p * qfi_pure(psi).value;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12)
    throw ValidationError("convexity_bound: weights sum to " + std::to_string(weight_sum));
  // The weights carry no phase dependence, so their classical term vanishes.
  return bound;
}

double conditioned_qfi(const StateSpec& spec, const SolverOptions& opt) {
  const State s = make_state(spec);
  const double vac = vacuum_probability(s);
  if (1.0 - vac <= 1e-12)
    throw NumericalError("conditioned_qfi: undefined conditioning, vacuum probability is 1");
  return qfi(s, opt).value / (1.0 - vac);
}

double prob_mix_qfi_closed(const PureState& phi_state, double p) {
  if (p < 0.0 || p > 1.0) throw ValidationError("prob_mix_qfi_closed: p must lie in [0, 1]");
  const double vac_overlap = std::norm(phi_state.amplitude({0, 0}));
  if (1.0 - vac_overlap <= 1e-12)
    throw NumericalError("prob_mix_qfi_closed: degenerate probe, |phi> is the vacuum");
  const auto [m1, m2] = difference_moments(phi_state);
  const double pure_qfi = m2 - m1 * m1;
  return p * pure_qfi - p * (1.0 - p) * m1 * m1 * vac_overlap / (1.0 - vac_overlap);
}

double coherent_mix_qfi_closed(const PureState& phi_state, double p) {
  if (p < 0.0 || p > 1.0)
    throw ValidationError("coherent_mix_qfi_closed: p must lie in [0, 1]");
  if (std::abs(phi_state.amplitude({0, 0})) > 1e-12)
    throw ValidationError("coherent_mix_qfi_closed: |phi> must have zero vacuum overlap");
  const auto [m1, m2] = difference_moments(phi_state);
  return p * m2 - p * p * m1 * m1;
}

double loss_bound(double n_mean, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ValidationError("loss_bound: gamma must lie in (0, 1)");
  if (n_mean < 0.0) throw ValidationError("loss_bound: negative mean photon number");
  return n_mean * gamma / (1.0 - gamma);
}

double qcrb_variance(double fisher, long nu) {
  if (fisher < 0.0) throw ValidationError("qcrb_variance: negative Fisher information");
  if (nu < 1) throw ValidationError("qcrb_variance: nu must be >= 1");
  if (fisher == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (double(nu) * fisher);
}

}  // namespace qmetro
