#include "qmetro/fock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qmetro {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

std::string index_str(FockIndex f) {
  std::ostringstream os;
  os << "(" << f.n1 << "," << f.n2 << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState
// ---------------------------------------------------------------------------

PureState::PureState(KetMap amplitudes, int n_max) : amps_(std::move(amplitudes)), n_max_(n_max) {
  require(n_max >= 0, "PureState: n_max must be >= 0");
  double norm_sq = 0.0;
  for (auto it = amps_.begin(); it != amps_.end();) {
    const FockIndex f = it->first;
    require(f.n1 >= 0 && f.n2 >= 0 && f.n1 <= n_max && f.n2 <= n_max,
            "PureState: index " + index_str(f) + " outside truncation n_max=" +
                std::to_string(n_max));
    if (std::abs(it->second) < tol::prune) {
      it = amps_.erase(it);
    } else {
      norm_sq += std::norm(it->second);
      ++it;
    }
  }
  if (std::abs(norm_sq - 1.0) > tol::renormalize) {
    throw ValidationError("PureState: squared norm " + std::to_string(norm_sq) +
                          " too far from 1 to renormalize");
  }
  if (norm_sq != 1.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [f, a] : amps_) a *= inv;
  }
}

Complex PureState::amplitude(FockIndex f) const {
  auto it = amps_.find(f);
  return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

Eigen::VectorXcd PureState::to_dense() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space_dim(n_max_));
  for (const auto& [f, a] : amps_) v(linear_index(f, n_max_)) = a;
  return v;
}

PureState PureState::embedded(int n_max) const {
  require(n_max >= n_max_, "PureState::embedded: cannot shrink the truncation");
  PureState out = *this;
  out.n_max_ = n_max;
  return out;
}

// ---------------------------------------------------------------------------
// HermitianOperator
// ---------------------------------------------------------------------------

void HermitianOperator::check_index(FockIndex f) const {
  require(f.n1 >= 0 && f.n2 >= 0 && f.n1 <= n_max_ && f.n2 <= n_max_,
          "HermitianOperator: index " + index_str(f) + " outside truncation n_max=" +
              std::to_string(n_max_));
}

void HermitianOperator::set_entry(FockIndex a, FockIndex b, Complex v) {
  check_index(a);
  check_index(b);
  if (b < a) {
    std::swap(a, b);
    v = std::conj(v);
  }
  if (a == b) {
    if (std::abs(v.imag()) > tol::hermitian)
      throw ValidationError("HermitianOperator: diagonal entry at " + index_str(a) +
                            " has imaginary part " + std::to_string(v.imag()));
    v = Complex{v.real(), 0.0};
  }
  if (std::abs(v) < tol::prune) {
    entries_.erase({a, b});
  } else {
    entries_[{a, b}] = v;
  }
}

void HermitianOperator::add_entry(FockIndex a, FockIndex b, Complex v) {
  set_entry(a, b, entry(a, b) + (b < a ? std::conj(v) : v));
}

Complex HermitianOperator::entry(FockIndex a, FockIndex b) const {
  const bool swapped = b < a;
  if (swapped) std::swap(a, b);
  auto it = entries_.find({a, b});
  if (it == entries_.end()) return {0.0, 0.0};
  return swapped ? std::conj(it->second) : it->second;
}

HermitianOperator HermitianOperator::from_entries(const EntryMap& entries, int n_max) {
  HermitianOperator out(n_max);
  for (const auto& [key, v] : entries) {
    const auto& [a, b] = key;
    const Complex existing = out.entry(a, b);
    if (std::abs(existing) > 0.0 && std::abs(existing - v) > tol::hermitian)
      throw ValidationError("HermitianOperator: conflicting conjugate entries at " +
                            index_str(a) + "," + index_str(b));
    out.set_entry(a, b, v);
  }
  return out;
}

double HermitianOperator::trace() const {
  double t = 0.0;
  for (const auto& [key, v] : entries_)
    if (key.first == key.second) t += v.real();
  return t;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
  const int d = space_dim(n_max_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [key, v] : entries_) {
    const int i = linear_index(key.first, n_max_);
    const int j = linear_index(key.second, n_max_);
    m(i, j) = v;
    if (i != j) m(j, i) = std::conj(v);
  }
  return m;
}

HermitianOperator HermitianOperator::from_dense(const Eigen::MatrixXcd& m, int n_max,
                                                double prune) {
  const int d = space_dim(n_max);
  require(m.rows() == d && m.cols() == d,
          "HermitianOperator::from_dense: matrix size does not match n_max");
  HermitianOperator out(n_max);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const Complex v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      if (std::abs(m(i, j) - std::conj(m(j, i))) > 1e-9)
        throw ValidationError("HermitianOperator::from_dense: input is not Hermitian");
      if (std::abs(v) <= prune) continue;
      out.set_entry(from_linear(i, n_max), from_linear(j, n_max),
                    i == j ? Complex{v.real(), 0.0} : v);
    }
  }
  return out;
}

HermitianOperator HermitianOperator::embedded(int n_max) const {
  require(n_max >= n_max_, "HermitianOperator::embedded: cannot shrink the truncation");
  HermitianOperator out(n_max);
  out.entries_ = entries_;
  return out;
}

void HermitianOperator::scale(double s) {
  for (auto& [key, v] : entries_) v *= s;
}

void HermitianOperator::prune(double threshold) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (std::abs(it->second) < threshold)
      it = entries_.erase(it);
    else
      ++it;
  }
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

DensityOperator DensityOperator::make(HermitianOperator m) {
  const double tr = m.trace();
  if (std::abs(tr - 1.0) > tol::renormalize)
    throw ValidationError("DensityOperator: trace " + std::to_string(tr) +
                          " too far from 1 to renormalize");
  if (tr != 1.0) m.scale(1.0 / tr);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.to_dense(),
                                                     Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd)
    throw ValidationError("DensityOperator: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  HermitianOperator m(psi.n_max());
  for (const auto& [a, va] : psi.amplitudes()) {
    for (const auto& [b, vb] : psi.amplitudes()) {
      if (b < a) continue;
      m.set_entry(a, b, va * std::conj(vb));
    }
  }
  return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::embedded(int n_max) const {
  return DensityOperator(mat_.embedded(n_max));
}

DensityOperator density_unchecked(HermitianOperator m) {
  return DensityOperator(std::move(m));
}

// ---------------------------------------------------------------------------
// State helpers
// ---------------------------------------------------------------------------

int n_max_of(const State& s) {
  return std::visit([](const auto& x) { return x.n_max(); }, s);
}

bool is_pure(const State& s) { return std::holds_alternative<PureState>(s); }

DensityOperator as_density(const State& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return DensityOperator::from_pure(*psi);
  return std::get<DensityOperator>(s);
}

State embedded(const State& s, int n_max) {
  return std::visit([&](const auto& x) -> State { return x.embedded(n_max); }, s);
}

// ---------------------------------------------------------------------------
// StateSpec
// ---------------------------------------------------------------------------

namespace {

void require_named_params(int n, double eta, const char* what) {
  require(n >= 1, std::string(what) + ": N must be a positive integer");
  require(std::isfinite(eta) && eta > 0.0, std::string(what) + ": eta must be finite and > 0");
}

}  // namespace

StateSpec StateSpec::noon(int n) {
  require(n >= 1, "Noon: N must be a positive integer");
  return StateSpec(NoonSpec{n});
}

StateSpec StateSpec::vacuum_fock_squared(int n, double eta) {
  require_named_params(n, eta, "VacuumFockSquared");
  return StateSpec(VacuumFockSquaredSpec{n, eta});
}

StateSpec StateSpec::rho_ons(int n, double eta) {
  require_named_params(n, eta, "RhoONs");
  return StateSpec(RhoONsSpec{n, eta});
}

StateSpec StateSpec::rho_onn(int n, double eta) {
  require_named_params(n, eta, "RhoONN");
  return StateSpec(RhoONNSpec{n, eta});
}

StateSpec StateSpec::psi_onn(int n, double eta) {
  require_named_params(n, eta, "PsiONN");
  return StateSpec(PsiONNSpec{n, eta});
}

StateSpec StateSpec::master_state(int n, double alpha, double beta) {
  require(n >= 1, "MasterState: N must be a positive integer");
  require(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + 1e-15,
          "MasterState: weights must satisfy alpha, beta >= 0 and alpha + beta <= 1");
  return StateSpec(MasterStateSpec{n, alpha, beta});
}

StateSpec StateSpec::prob_mix(StateSpec inner, double p) {
  require(p >= 0.0 && p <= 1.0, "ProbMix: p must lie in [0, 1]");
  return StateSpec(ProbMixSpec{std::make_shared<const StateSpec>(std::move(inner)), p});
}

StateSpec StateSpec::coherent_prob_mix(StateSpec inner, double p) {
  require(p >= 0.0 && p <= 1.0, "CoherentProbMix: p must lie in [0, 1]");
  return StateSpec(CoherentProbMixSpec{std::make_shared<const StateSpec>(std::move(inner)), p});
}

StateSpec StateSpec::custom_pure(KetMap amplitudes, int n_max) {
  return StateSpec(CustomPureSpec{std::move(amplitudes), n_max});
}

StateSpec StateSpec::custom_mixed(EntryMap entries, int n_max) {
  return StateSpec(CustomMixedSpec{std::move(entries), n_max});
}

std::string StateSpec::kind() const {
  struct Visitor {
    std::string operator()(const NoonSpec&) const { return "noon"; }
    std::string operator()(const VacuumFockSquaredSpec&) const { return "vacuum_fock_squared"; }
    std::string operator()(const RhoONsSpec&) const { return "rho_ons"; }
    std::string operator()(const RhoONNSpec&) const { return "rho_onn"; }
    std::string operator()(const PsiONNSpec&) const { return "psi_onn"; }
    std::string operator()(const MasterStateSpec&) const { return "master_state"; }
    std::string operator()(const ProbMixSpec&) const { return "prob_mix"; }
    std::string operator()(const CoherentProbMixSpec&) const { return "coherent_prob_mix"; }
    std::string operator()(const CustomPureSpec&) const { return "custom_pure"; }
    std::string operator()(const CustomMixedSpec&) const { return "custom_mixed"; }
  };
  return std::visit(Visitor{}, v_);
}

// ---------------------------------------------------------------------------
// make_state
// ---------------------------------------------------------------------------

namespace {

int natural_n_max(const StateSpec& spec);

struct NaturalNmax {
  int operator()(const NoonSpec& s) const { return s.n; }
  int operator()(const VacuumFockSquaredSpec& s) const { return s.n; }
  int operator()(const RhoONsSpec& s) const { return s.n; }
  int operator()(const RhoONNSpec& s) const { return s.n; }
  int operator()(const PsiONNSpec& s) const { return s.n; }
  int operator()(const MasterStateSpec& s) const { return s.n; }
  int operator()(const ProbMixSpec& s) const { return natural_n_max(*s.inner); }
  int operator()(const CoherentProbMixSpec& s) const { return natural_n_max(*s.inner); }
  int operator()(const CustomPureSpec& s) const { return s.n_max; }
  int operator()(const CustomMixedSpec& s) const { return s.n_max; }
};

int natural_n_max(const StateSpec& spec) { return std::visit(NaturalNmax{}, spec.value()); }

// |N00N><N00N| block entries, scaled by `weight`, added onto `m`.
void add_noon_projector(HermitianOperator& m, int n, double weight) {
  const FockIndex a{n, 0}, b{0, n};
  m.add_entry(a, a, 0.5 * weight);
  m.add_entry(b, b, 0.5 * weight);
  m.add_entry(b, a, 0.5 * weight);
}

struct MakeState {
  int n_max;

  State operator()(const NoonSpec& s) const {
    const double r = 1.0 / std::numbers::sqrt2;
    return PureState({{{s.n, 0}, r}, {{0, s.n}, r}}, n_max);
  }

  State operator()(const VacuumFockSquaredSpec& s) const {
    const double c = 1.0 / (1.0 + s.eta * s.eta);
    return PureState({{{0, 0}, c},
                      {{s.n, 0}, c * s.eta},
                      {{0, s.n}, c * s.eta},
                      {{s.n, s.n}, c * s.eta * s.eta}},
                     n_max);
  }

  State operator()(const RhoONsSpec& s) const {
    const double e2 = s.eta * s.eta;
    const double c = 1.0 / ((1.0 + e2) * (1.0 + e2));
    HermitianOperator m(n_max);
    m.set_entry({0, 0}, {0, 0}, c);
    add_noon_projector(m, s.n, 2.0 * e2 * c);
    m.set_entry({s.n, s.n}, {s.n, s.n}, e2 * e2 * c);
    return density_unchecked(std::move(m));
  }

  State operator()(const RhoONNSpec& s) const {
    const double e2 = s.eta * s.eta;
    const double c = 1.0 / ((1.0 + e2) * (1.0 + e2));
    HermitianOperator m(n_max);
    m.set_entry({0, 0}, {0, 0}, (1.0 + e2 * e2) * c);
    add_noon_projector(m, s.n, 2.0 * e2 * c);
    return density_unchecked(std::move(m));
  }

  State operator()(const PsiONNSpec& s) const {
    const double e2 = s.eta * s.eta;
    const double d = 1.0 + e2;
    return PureState({{{0, 0}, std::sqrt(1.0 + e2 * e2) / d},
                      {{s.n, 0}, s.eta / d},
                      {{0, s.n}, s.eta / d}},
                     n_max);
  }

  State operator()(const MasterStateSpec& s) const {
    HermitianOperator m(n_max);
    if (s.alpha > 0.0) m.set_entry({0, 0}, {0, 0}, s.alpha);
    add_noon_projector(m, s.n, s.beta);
    const double rest = 1.0 - s.alpha - s.beta;
    if (rest > 0.0) m.set_entry({s.n, s.n}, {s.n, s.n}, rest);
    return density_unchecked(std::move(m));
  }

  State operator()(const ProbMixSpec& s) const {
    const State inner = make_state(*s.inner, n_max);
    const auto* psi = std::get_if<PureState>(&inner);
    if (psi == nullptr)
      throw ValidationError("ProbMix: inner spec must describe a pure state");
    HermitianOperator m(n_max);
    m.set_entry({0, 0}, {0, 0}, 1.0 - s.p);
    for (const auto& [a, va] : psi->amplitudes())
      for (const auto& [b, vb] : psi->amplitudes()) {
        if (b < a) continue;
        m.add_entry(a, b, s.p * va * std::conj(vb));
      }
    return density_unchecked(std::move(m));
  }

  State operator()(const CoherentProbMixSpec& s) const {
    const State inner = make_state(*s.inner, n_max);
    const auto* psi = std::get_if<PureState>(&inner);
    if (psi == nullptr)
      throw ValidationError("CoherentProbMix: inner spec must describe a pure state");
    if (std::abs(psi->amplitude({0, 0})) > 1e-12)
      throw ValidationError(
          "CoherentProbMix: inner state must have zero vacuum overlap");
    KetMap amps = psi->amplitudes();
    const double sp = std::sqrt(s.p);
    for (auto& [f, a] : amps) a *= sp;
    amps[{0, 0}] = std::sqrt(1.0 - s.p);
    return PureState(std::move(amps), n_max);
  }

  State operator()(const CustomPureSpec& s) const { return PureState(s.amplitudes, n_max); }

  State operator()(const CustomMixedSpec& s) const {
    return DensityOperator::make(HermitianOperator::from_entries(s.entries, n_max));
  }
};

}  // namespace

State make_state(const StateSpec& spec, std::optional<int> n_max) {
  const int natural = natural_n_max(spec);
  int nm = n_max.value_or(natural);
  if (nm < natural)
    throw ValidationError("make_state: n_max=" + std::to_string(nm) +
                          " smaller than the largest occupation " + std::to_string(natural));
  return std::visit(MakeState{nm}, spec.value());
}

// ---------------------------------------------------------------------------
// Operators and channels
// ---------------------------------------------------------------------------

HermitianOperator generator_k(int n_max) {
  HermitianOperator k(n_max);
  for (int n1 = 0; n1 <= n_max; ++n1)
    for (int n2 = 0; n2 <= n_max; ++n2)
      if (n1 != n2) k.set_entry({n1, n2}, {n1, n2}, FockIndex{n1, n2}.k_value());
  return k;
}

PureState encode_phase(const PureState& psi, double phi) {
  KetMap amps = psi.amplitudes();
  for (auto& [f, a] : amps) a *= std::polar(1.0, -phi * f.k_value());
  // Amplitudes keep their magnitudes, so the norm check is free of drift.
  return PureState(std::move(amps), psi.n_max());
}

DensityOperator encode_phase(const DensityOperator& rho, double phi) {
  HermitianOperator m(rho.n_max());
  for (const auto& [key, v] : rho.matrix().upper_entries()) {
    const double dk = key.first.k_value() - key.second.k_value();
    m.set_entry(key.first, key.second, v * std::polar(1.0, -phi * dk));
  }
  return density_unchecked(std::move(m));
}

State encode_phase(const State& s, double phi) {
  return std::visit([&](const auto& x) -> State { return encode_phase(x, phi); }, s);
}

DensityOperator twirl_total_number(const State& s) {
  const DensityOperator rho = as_density(s);
  HermitianOperator m(rho.n_max());
  for (const auto& [key, v] : rho.matrix().upper_entries())
    if (key.first.total() == key.second.total()) m.set_entry(key.first, key.second, v);
  return density_unchecked(std::move(m));
}

// ---------------------------------------------------------------------------
// Number statistics
// ---------------------------------------------------------------------------

namespace {

// Sum of f(total) over the diagonal probability weights.
template <typename F>
double diagonal_expectation(const State& s, F&& f) {
  double acc = 0.0;
  if (const auto* psi = std::get_if<PureState>(&s)) {
    for (const auto& [idx, a] : psi->amplitudes()) acc += std::norm(a) * f(idx);
  } else {
    const auto& rho = std::get<DensityOperator>(s);
    for (const auto& [key, v] : rho.matrix().upper_entries())
      if (key.first == key.second) acc += v.real() * f(key.first);
  }
  return acc;
}

}  // namespace

double mean_total_number(const State& s) {
  return diagonal_expectation(s, [](FockIndex f) { return double(f.total()); });
}

double mean_total_number_squared(const State& s) {
  return diagonal_expectation(s, [](FockIndex f) {
    return double(f.total()) * double(f.total());
  });
}

double vacuum_probability(const State& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return std::norm(psi->amplitude({0, 0}));
  return std::get<DensityOperator>(s).entry({0, 0}, {0, 0}).real();
}

std::map<int, double> total_number_distribution(const State& s) {
  std::map<int, double> dist;
  if (const auto* psi = std::get_if<PureState>(&s)) {
    for (const auto& [idx, a] : psi->amplitudes()) dist[idx.total()] += std::norm(a);
  } else {
    const auto& rho = std::get<DensityOperator>(s);
    for (const auto& [key, v] : rho.matrix().upper_entries())
      if (key.first == key.second) dist[key.first.total()] += v.real();
  }
  double total = 0.0;
  for (const auto& [n, p] : dist) total += p;
  if (std::abs(total - 1.0) > tol::norm_check)
    throw NumericalError("total_number_distribution: probabilities sum to " +
                         std::to_string(total));
  return dist;
}

}  // namespace qmetro
