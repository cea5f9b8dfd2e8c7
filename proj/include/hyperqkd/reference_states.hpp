// Canonical reference states, expanded from their factored product
// expressions rather than hand-entered amplitude tables.

#pragma once

#include <vector>

#include "hyperqkd/modes.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

// One summand of a two-photon product factor. Each factor only fills in the
// degrees of freedom it talks about; untouched fields keep their erased /
// unset sentinels.
struct PairTerm {
    PhotonLabel a;
    PhotonLabel b;
    double sign = 1.0;
};

using Factor = std::vector<PairTerm>;

// Expands a product of sum-factors into a normalized two-photon state. The
// factors must touch disjoint degrees of freedom.
PureState product_state(std::shared_ptr<ModeRegistry> registry, std::span<const Factor> factors);

Factor polarization_factor_hv_vh();
Factor frequency_factor_conjugate_pairs();
Factor mode_factor(std::span<const std::pair<ModeId, ModeId>> pairs,
                   std::span<const double> signs = {});

// Pump reference: equal superposition of frequencies 3 and 12 on one rail.
PureState pump_reference(const StandardModes& m);

// Two-path intermediate: (HV+VH) x (conjugate-pair lines) x (a1b1 + a2b2).
PureState two_path_pair_state(const StandardModes& m);

// Eight-path intermediate after splitting, all relative phases +1:
// (HV+VH) x (lines) x [(a11+a12)(b11+b12) + (a21+a22)(b21+b22)].
PureState eight_path_state(const StandardModes& m);

// The 2x4x4 hyperentangled target: (HV+VH) x (lines) x (paired split modes).
PureState hyper_target_state(const StandardModes& m);

// Swapping resource for the key protocol: frequency and spatial factors only,
// polarization erased.
PureState freq_spatial_pair_state(const StandardModes& m);

// Signed shifted variants of the paired spatial state, k = 1..16; k = 1 is
// the plain a11b11+a12b12+a21b21+a22b22 (frequency and polarization erased).
PureState spatial_bell_state(const StandardModes& m, int k);

}  // namespace hyperqkd
