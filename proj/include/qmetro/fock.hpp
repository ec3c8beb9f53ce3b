#pragma once

/*
 * Truncated two-mode Fock space: sparse kets and Hermitian operators, the
 * named probe-state families, diagonal phase encoding, the total-number
 * twirl, and photon-number statistics.
 */

#include <compare>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "qmetro/errors.hpp"

namespace qmetro {

using Complex = std::complex<double>;

namespace tol {
inline constexpr double norm_check = 1e-12;   // norm/trace equality assertions
inline constexpr double renormalize = 1e-9;   // renormalize below, reject above
inline constexpr double psd = 1e-10;          // eigenvalues >= -psd
inline constexpr double hermitian = 1e-12;    // conjugate-pair consistency
inline constexpr double prune = 1e-15;        // drop entries below this magnitude
}  // namespace tol

/// Occupation pair |n1, n2>.
struct FockIndex {
  int n1 = 0;
  int n2 = 0;

  auto operator<=>(const FockIndex&) const = default;

  int total() const { return n1 + n2; }
  /// Eigenvalue of the phase generator K = (n1 - n2)/2.
  double k_value() const { return 0.5 * (n1 - n2); }
};

inline int space_dim(int n_max) { return (n_max + 1) * (n_max + 1); }
inline int linear_index(FockIndex f, int n_max) { return f.n1 * (n_max + 1) + f.n2; }
inline FockIndex from_linear(int idx, int n_max) {
  return FockIndex{idx / (n_max + 1), idx % (n_max + 1)};
}

using KetMap = std::map<FockIndex, Complex>;
using EntryKey = std::pair<FockIndex, FockIndex>;
using EntryMap = std::map<EntryKey, Complex>;

/// Unit-norm sparse ket. Construction renormalizes when the norm is off by
/// less than tol::renormalize and rejects otherwise.
class PureState {
 public:
  PureState(KetMap amplitudes, int n_max);

  int n_max() const { return n_max_; }
  const KetMap& amplitudes() const { return amps_; }
  Complex amplitude(FockIndex f) const;

  Eigen::VectorXcd to_dense() const;
  /// Same ket in a larger truncation.
  PureState embedded(int n_max) const;

 private:
  KetMap amps_;
  int n_max_;
};

/// Sparse Hermitian operator. Only the canonical (upper) triangle is stored,
/// so entry(a,b) == conj(entry(b,a)) holds exactly.
class HermitianOperator {
 public:
  explicit HermitianOperator(int n_max) : n_max_(n_max) {
    if (n_max < 0) throw ValidationError("HermitianOperator: n_max must be >= 0");
  }
  /// Accepts entries in either triangle; conflicting conjugate pairs are rejected.
  static HermitianOperator from_entries(const EntryMap& entries, int n_max);

  void set_entry(FockIndex a, FockIndex b, Complex v);
  void add_entry(FockIndex a, FockIndex b, Complex v);
  Complex entry(FockIndex a, FockIndex b) const;

  int n_max() const { return n_max_; }
  const EntryMap& upper_entries() const { return entries_; }
  double trace() const;

  Eigen::MatrixXcd to_dense() const;
  static HermitianOperator from_dense(const Eigen::MatrixXcd& m, int n_max,
                                      double prune = tol::prune);

  HermitianOperator embedded(int n_max) const;
  void scale(double s);
  void prune(double threshold = tol::prune);

 private:
  void check_index(FockIndex f) const;

  EntryMap entries_;  // keys satisfy first <= second
  int n_max_;
};

/// Unit-trace, positive-semidefinite Hermitian operator. `make` validates
/// trace (renormalize within tol::renormalize) and the spectrum
/// (eigenvalues >= -tol::psd).
class DensityOperator {
 public:
  static DensityOperator make(HermitianOperator m);
  static DensityOperator from_pure(const PureState& psi);

  const HermitianOperator& matrix() const { return mat_; }
  int n_max() const { return mat_.n_max(); }
  Complex entry(FockIndex a, FockIndex b) const { return mat_.entry(a, b); }
  Eigen::MatrixXcd to_dense() const { return mat_.to_dense(); }
  DensityOperator embedded(int n_max) const;

 private:
  explicit DensityOperator(HermitianOperator m) : mat_(std::move(m)) {}
  friend DensityOperator density_unchecked(HermitianOperator m);

  HermitianOperator mat_;
};

/// Internal trusted constructor for operations that preserve the density
/// invariants (phase encoding, twirl, convex averaging).
DensityOperator density_unchecked(HermitianOperator m);

using State = std::variant<PureState, DensityOperator>;

int n_max_of(const State& s);
bool is_pure(const State& s);
DensityOperator as_density(const State& s);
State embedded(const State& s, int n_max);

// ---------------------------------------------------------------------------
// State specifications
// ---------------------------------------------------------------------------

class StateSpec;

struct NoonSpec {
  int n;
};
/// (|0> + eta |N>)^{x2} / (1 + eta^2), both modes.
struct VacuumFockSquaredSpec {
  int n;
  double eta;
};
/// Total-number twirl of VacuumFockSquared: weights {1, 2 eta^2, eta^4} on
/// {|00>, N00N, |NN>}, normalized by (1 + eta^2)^2.
struct RhoONsSpec {
  int n;
  double eta;
};
/// RhoONs with the |NN> block dropped into vacuum.
struct RhoONNSpec {
  int n;
  double eta;
};
/// Coherent counterpart of RhoONN.
struct PsiONNSpec {
  int n;
  double eta;
};
/// alpha |00><00| + beta |N00N><N00N| + (1-alpha-beta) |NN><NN|.
struct MasterStateSpec {
  int n;
  double alpha;
  double beta;
};
/// (1-p) vacuum + p |inner><inner|; inner must be pure.
struct ProbMixSpec {
  std::shared_ptr<const StateSpec> inner;
  double p;
};
/// sqrt(1-p) |00> + sqrt(p) |inner>; inner must be pure and vacuum-orthogonal.
struct CoherentProbMixSpec {
  std::shared_ptr<const StateSpec> inner;
  double p;
};
struct CustomPureSpec {
  KetMap amplitudes;
  int n_max;
};
struct CustomMixedSpec {
  EntryMap entries;
  int n_max;
};

class StateSpec {
 public:
  using Variant =
      std::variant<NoonSpec, VacuumFockSquaredSpec, RhoONsSpec, RhoONNSpec,
                   PsiONNSpec, MasterStateSpec, ProbMixSpec, CoherentProbMixSpec,
                   CustomPureSpec, CustomMixedSpec>;

  static StateSpec noon(int n);
  static StateSpec vacuum_fock_squared(int n, double eta);
  static StateSpec rho_ons(int n, double eta);
  static StateSpec rho_onn(int n, double eta);
  static StateSpec psi_onn(int n, double eta);
  static StateSpec master_state(int n, double alpha, double beta);
  static StateSpec prob_mix(StateSpec inner, double p);
  static StateSpec coherent_prob_mix(StateSpec inner, double p);
  static StateSpec custom_pure(KetMap amplitudes, int n_max);
  static StateSpec custom_mixed(EntryMap entries, int n_max);

  const Variant& value() const { return v_; }
  std::string kind() const;

 private:
  explicit StateSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Builds the declared state. Pure specs yield a PureState, mixture specs a
/// DensityOperator. The truncation defaults to the largest occupation in the
/// spec; an override must not be smaller.
State make_state(const StateSpec& spec, std::optional<int> n_max = std::nullopt);

// ---------------------------------------------------------------------------
// Operators and channels
// ---------------------------------------------------------------------------

/// K = (n1_hat - n2_hat)/2, diagonal in the Fock basis.
HermitianOperator generator_k(int n_max);

/// rho(phi) = exp(-i phi K) rho exp(+i phi K). Only off-diagonal phases move.
PureState encode_phase(const PureState& psi, double phi);
DensityOperator encode_phase(const DensityOperator& rho, double phi);
State encode_phase(const State& s, double phi);

/// Erases coherences between different total-number sectors.
DensityOperator twirl_total_number(const State& s);

// ---------------------------------------------------------------------------
// Number statistics
// ---------------------------------------------------------------------------

double mean_total_number(const State& s);
double mean_total_number_squared(const State& s);
double vacuum_probability(const State& s);
/// Marginal over total photon number; sums to one.
std::map<int, double> total_number_distribution(const State& s);

}  // namespace qmetro
