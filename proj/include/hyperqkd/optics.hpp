// Optical elements as exact state transforms: beam splitters, frequency
// multipliers, pair-creating crystals, cross-Kerr probe tagging with
// photon-number post-selection, frequency (de)multiplexers and polarization
// analysis.

#pragma once

#include <map>
#include <numeric>

#include "hyperqkd/rng.hpp"
#include "hyperqkd/state.hpp"

namespace hyperqkd {

// Raised when a photon-number post-selection leaves no surviving terms.
struct PostSelectionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational multiple of pi. Probe tags are only ever compared for
// equality, so phases never pass through floating point.
class Phase {
  public:
    constexpr Phase() = default;
    constexpr Phase(int num, int den) {
        if (den <= 0) throw std::invalid_argument("Phase: denominator must be positive");
        const int g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        num %= 2 * den;
        if (num < 0) num += 2 * den;
        num_ = num;
        den_ = den;
    }

    int num() const { return num_; }
    int den() const { return den_; }
    double radians() const;

    friend constexpr Phase operator+(const Phase& x, const Phase& y) {
        return Phase(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
    }
    auto operator<=>(const Phase&) const = default;

  private:
    int num_ = 0;  // value = num/den * pi, reduced, num in [0, 2*den)
    int den_ = 1;
};

// Probe phases for the source's branch comparison; only the theta vs 2*theta
// distinction is observable.
inline constexpr Phase kProbeTheta{1, 8};
inline constexpr Phase kProbeTwoTheta = kProbeTheta + kProbeTheta;

// Distinct phase classes read out by the analyzer stages.
inline constexpr std::array<Phase, 4> kGroupPhases{Phase{1, 16}, Phase{3, 16}, Phase{5, 16},
                                                   Phase{7, 16}};

// Fixed half mixer: (|top>+|bottom>)/sqrt2 -> |top>, (|top>-|bottom>)/sqrt2
// -> |bottom>; its own inverse.
CMatrix beam_splitter_matrix();

struct BeamSplitterSpec {
    ModeId in_top, in_bottom, out_top, out_bottom;
};

PureState beam_splitter(const PureState& state, const BeamSplitterSpec& spec);

// Doubles the frequency of any photon occupying `mode`.
PureState frequency_multiplier(const PureState& state, ModeId mode);

// Crystal pair emission for one pump component: opposite polarizations times
// the symmetrized signal/idler frequency pair, on the given output paths.
// Pump 3 emits lines (1,2); pump 12 emits lines (4,8).
PureState spdc_pair(std::shared_ptr<ModeRegistry> registry, int pump_freq, ModeId mode_a,
                    ModeId mode_b);

struct PhaseAssignment {
    std::map<ModeId, Phase> by_mode;
};

// State plus the probe phases each branch imprinted on the two coherent arms.
struct KerrTagged {
    PureState state;
    double alpha_mag = 1.0;                     // probe amplitude, bookkeeping only
    std::vector<std::pair<Phase, Phase>> tags;  // (upper, lower), aligned with state.terms()
};

// Two-arm tagging: the upper arm reads photon A's path, the lower arm photon
// B's. Each assignment must cover that photon's support.
KerrTagged kerr_tag(const PureState& state, const PhaseAssignment& upper,
                    const PhaseAssignment& lower);

// One-arm tagging keyed on a single photon's path (lower arm stays at 0).
KerrTagged kerr_tag_single(const PureState& state, Photon photon,
                           const PhaseAssignment& assignment);

// Compares the two probe arms on a balanced splitter and keeps the vacuum
// outcome of the difference arm: exactly the terms whose upper and lower
// tags agree survive. Returns (renormalized state, kept weight).
std::pair<PureState, double> kerr_compare_postselect(const KerrTagged& tagged);

// Weight of each phase class (upper-arm tag); every tag must lie in exactly
// one class.
std::vector<double> kerr_class_weights(const KerrTagged& tagged, std::span<const Phase> classes);

// Restriction to one phase class, renormalized; returns the class weight too.
std::pair<PureState, double> kerr_collapse_class(const KerrTagged& tagged,
                                                 std::span<const Phase> classes, int index);

struct PhaseReadout {
    int class_index = -1;
    PureState state;
    double probability = 0.0;
};

// Samples a phase class by its weight and collapses onto it.
PhaseReadout kerr_phase_readout(const KerrTagged& tagged, std::span<const Phase> classes,
                                RngStream& rng);

// Splits `mode` into new paths by frequency; the routing must cover every
// frequency present on that mode.
PureState demultiplex(const PureState& state, ModeId mode, const std::map<int, ModeId>& routing);

// Merges the listed paths into `target`. Legal only when the relabeling is
// injective on basis labels; a collision means physical information was not
// erased first.
PureState multiplex(const PureState& state, std::span<const ModeId> sources, ModeId target);

// Sets the photon's frequency to `target_freq` on every term. Injective only
// when path labels already encode the demultiplexed frequency.
PureState erase_frequency(const PureState& state, Photon photon, int target_freq);

struct PolarizationResult {
    Polarization outcome = Polarization::None;
    PureState state;
    double probability = 0.0;
};

PolarizationResult polarization_measure(const PureState& state, Photon photon, RngStream& rng);

}  // namespace hyperqkd
