#pragma once

/*
 * Photon-counting measurements: the counting POVM, an optional beam-splitter
 * recombiner applied as a POVM rotation, outcome distributions, seeded
 * finite-shot sampling, and the detection-event class summary for the
 * vacuum-Fock probe family.
 */

#include <cstdint>
#include <map>
#include <numbers>

#include "qmetro/fock.hpp"
#include "qmetro/frequentist.hpp"

namespace qmetro {

struct CountingRecord {
  std::map<FockIndex, std::uint64_t> histogram;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  int worst_case_photons = 0;        // largest n1 + n2 seen in a single shot
  double mean_photons_per_shot = 0.0;
};

/// Projectors |n1,n2><n1,n2| for every index of the truncated space.
Povm photon_counting_povm(int n_max);

/// exp(-i theta (a1^dag a2 + a1 a2^dag)), block-diagonal in total number.
/// Exact for sectors with total <= n_max; sectors beyond that are truncated
/// (still unitary, but not the untruncated beam splitter).
Eigen::MatrixXcd beam_splitter_unitary(int n_max, double theta);

/// Counting preceded by a recombining beam splitter: effects U^dag P U. The
/// default theta = pi/4 is the 50:50 recombiner closing the Mach-Zehnder;
/// counting alone is insensitive to the encoded phase.
Povm recombined_counting_povm(int n_max, double theta = std::numbers::pi / 4);

/// Born probabilities of the POVM on rho(phi); sums to one.
std::map<FockIndex, double> outcome_distribution(const State& s, double phi,
                                                 const Povm& povm);

/// i.i.d. categorical draws from the outcome distribution, deterministic for
/// a fixed seed (SplitMix64).
CountingRecord sample_counts(const State& s, double phi, const Povm& povm,
                             std::uint64_t shots, std::uint64_t seed);

struct EventClass {
  double probability = 0.0;
  int photons = 0;
  bool informative = false;
};

/// The three detection-event classes of the vacuum-Fock family: no clicks,
/// N photons in superposition across the phases, and N photons through each
/// arm. Only the middle class carries phase information.
struct EventClassSummary {
  int n = 0;
  EventClass no_click;
  EventClass n_class;
  EventClass two_n_class;
};

/// Only defined for VacuumFockSquared, RhoONs, RhoONN and PsiONN specs.
EventClassSummary event_class_summary(const StateSpec& spec);

}  // namespace qmetro
