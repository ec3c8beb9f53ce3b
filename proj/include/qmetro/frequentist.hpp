#pragma once

/*
 * Frequentist estimation bounds: pure- and mixed-state quantum Fisher
 * information via spectral SLD solves, classical Fisher information of a
 * POVM, the convexity bound, conditioned QFI, probabilistic-sensing closed
 * forms, and the photon-loss bound.
 */

#include <optional>
#include <string>
#include <vector>

#include "qmetro/fock.hpp"

namespace qmetro {

/// Numerical cutoffs shared by the spectral solvers.
struct SolverOptions {
  double eps_supp = 1e-10;  // eigenvalue-sum cutoff defining the support
  double leak_tol = 1e-10;  // allowed RHS magnitude outside the support
  double eps_prob = 1e-12;  // CFI outcome pruning
};

enum class QfiMethod { PureVariance, SpectralSld, ClosedForm };

std::string to_string(QfiMethod m);

struct QfiResult {
  double value = 0.0;
  QfiMethod method = QfiMethod::PureVariance;
  std::optional<HermitianOperator> sld;
};

/// Measurement as a list of positive effects summing to the identity.
class Povm {
 public:
  Povm(std::vector<HermitianOperator> effects, std::vector<FockIndex> labels);

  const std::vector<HermitianOperator>& effects() const { return effects_; }
  const std::vector<FockIndex>& labels() const { return labels_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return effects_.size(); }

  /// Full PSD check per effect (eigensolve); intended for tests and small
  /// spaces, completeness is always verified at construction.
  void validate_positivity(double tolerance = 1e-10) const;

 private:
  std::vector<HermitianOperator> effects_;
  std::vector<FockIndex> labels_;
  int n_max_;
};

struct PureDecomposition {
  std::vector<std::pair<double, PureState>> terms;  // weights sum to 1
};

struct CfiResult {
  double value = 0.0;
  /// Set when an outcome has vanishing probability but a non-vanishing
  /// derivative; the finite sum is then not a faithful Fisher information.
  bool divergent = false;
};

/// Variance of n1_hat - n2_hat in the given pure state.
QfiResult qfi_pure(const PureState& psi);

/// d rho / d phi at the encoded state, computed entrywise from the commutator
/// with the generator K.
HermitianOperator phase_derivative(const DensityOperator& rho, double phi);

/// SLD of rho(phi): spectral Lyapunov solve restricted to the support of
/// rho(phi). Throws NumericalError when the derivative leaks outside the
/// support beyond leak_tol.
HermitianOperator sld(const DensityOperator& rho, double phi,
                      const SolverOptions& opt = {});

/// Tr(rho L^2) with the SLD above.
QfiResult qfi_mixed(const DensityOperator& rho, double phi,
                    const SolverOptions& opt = {});

/// Dispatches to qfi_pure or qfi_mixed (at phi = 0).
QfiResult qfi(const State& s, const SolverOptions& opt = {});

/// Classical Fisher information of the POVM on rho(phi).
CfiResult cfi(const DensityOperator& rho, double phi, const Povm& povm,
              const SolverOptions& opt = {});
CfiResult cfi(const State& s, double phi, const Povm& povm,
              const SolverOptions& opt = {});

/// Convexity upper bound on the QFI of the mixture: the weights carry no
/// phase dependence here, so the bound is the weighted average of the pure
/// QFIs.
double convexity_bound(const PureDecomposition& decomp);

/// QFI divided by the probability of leaving the vacuum.
double conditioned_qfi(const StateSpec& spec, const SolverOptions& opt = {});

/// Closed-form QFI of (1-p)|0><0| + p|phi><phi|.
double prob_mix_qfi_closed(const PureState& phi_state, double p);

/// Closed-form QFI of sqrt(1-p)|0> + sqrt(p)|phi>; requires <0|phi> = 0.
double coherent_mix_qfi_closed(const PureState& phi_state, double p);

/// n_mean * gamma / (1 - gamma) for fractional loss rate gamma in (0, 1).
double loss_bound(double n_mean, double gamma);

/// 1 / (nu * F); +infinity when F = 0.
double qcrb_variance(double fisher, long nu);

}  // namespace qmetro
