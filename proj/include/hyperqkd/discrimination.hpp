// Two-stage analyzer that deterministically identifies the 16 single-photon
// frequency-spatial entangled states of one side: per-path probe phases sort
// the state into one of four groups, frequency erasure folds the group back
// onto four rails, and an interferometric readout resolves the sign pattern.
// Also the full joint readout of spatial / frequency / polarization outcomes.

#pragma once

#include <array>

#include "hyperqkd/modes.hpp"
#include "hyperqkd/optics.hpp"
#include "hyperqkd/rng.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

// Mutually orthogonal +-1 rows shared by the basis states, the group spatial
// states and the local-operation factorization. Rows and columns are 1-based
// rows, 0-based columns.
int sign_row_entry(int row, int col);

// Identifies one of the 16 basis states: group index i and sign index j.
struct DiscriminationOutcome {
    int group = 0;  // i in 1..4
    int index = 0;  // j in 1..4
    auto operator<=>(const DiscriminationOutcome&) const = default;
};

// Analyzer geometry: four input rails in grid order, the frequency line
// feeding each demultiplexer slot, the per-(rail, slot) paths, and the two
// detector rails of the final interferometer. The slot order is what differs
// between the two sides: photon B's analyzer swaps conjugate pairs.
struct MeasurementSetup {
    std::array<ModeId, 4> modes;
    std::array<int, 4> slot_freq;
    std::array<std::array<ModeId, 4>, 4> path;  // [mode][slot]
    ModeId out_up, out_down;
};

MeasurementSetup measurement_setup(const StandardModes& m, Photon side);

// The analyzer geometry as published for photon A, wired onto the b rails.
// Models a channel tap that ignores the conjugate-pair swap.
MeasurementSetup intercept_setup(const StandardModes& m);

// The 16 basis states of one side, i,j in 1..4: line s pairs with rail
// (s+i-1) mod 4, signs from row j. Side B pairs the swapped lines.
PureState basis_state(const StandardModes& m, Photon side, int i, int j);
PureState setup_basis_state(const MeasurementSetup& setup,
                            std::shared_ptr<ModeRegistry> registry, int i, int j);

// Spatial-only sign states the first stage leaves behind, on the setup's
// rails with the erased frequency value.
PureState phi_state(const MeasurementSetup& setup, std::shared_ptr<ModeRegistry> registry, int j);

inline constexpr int kErasedFrequency = 8;

struct GroupClassification {
    int group = 0;
    PureState state;  // collapsed, on the 16 demultiplexed paths
    double probability = 0.0;
};

// Exact group weights of the demultiplexed state (no sampling).
std::array<double, 4> group_weights(const PureState& state, Photon photon,
                                    const MeasurementSetup& setup);

GroupClassification classify_group(const PureState& state, Photon photon,
                                   const MeasurementSetup& setup, RngStream& rng);

// Erases frequency on the 16 paths and folds them back onto the four rails;
// for a collapsed group-i basis state the result is the matching sign state.
PureState freq_erase_to_phi(const PureState& state, Photon photon, const MeasurementSetup& setup,
                            int group);

struct PhiReadout {
    int index = 0;  // j in 1..4
    PureState state;
    double probability = 0.0;
};

PhiReadout phi_discriminate(const PureState& state, Photon photon, const MeasurementSetup& setup,
                            RngStream& rng);

struct DiscriminationResult {
    DiscriminationOutcome outcome;
    PureState state;
    double probability = 0.0;
};

DiscriminationResult discriminate(const PureState& state, Photon photon,
                                  const MeasurementSetup& setup, RngStream& rng);

// Exact outcome distribution of the sequential analyzer, indexed [i-1][j-1].
std::array<std::array<double, 4>, 4> discrimination_distribution(const PureState& state,
                                                                 Photon photon,
                                                                 const MeasurementSetup& setup);

struct PhotonReadout {
    ModeId mode{};
    int freq = 0;
    Polarization pol = Polarization::None;
};

struct HyperMeasurement {
    PhotonReadout a, b;
    PureState state;
};

// Joint readout of both photons: spatial detection, then frequency
// demultiplexing, then polarization analysis, sampled by Born weights.
HyperMeasurement measure_hyper(const PureState& state, RngStream& rng);

}  // namespace hyperqkd
