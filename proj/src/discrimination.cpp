#include "hyperqkd/discrimination.hpp"

#include <algorithm>
#include <cmath>

namespace hyperqkd {

namespace {

constexpr int kSignRows[4][4] = {
    {+1, +1, +1, +1},
    {+1, -1, -1, +1},
    {+1, -1, +1, -1},
    {+1, +1, -1, -1},
};

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

const Phase& kStageTheta1 = kGroupPhases[0];
const Phase& kStageTheta2 = kGroupPhases[1];

int rail_index(const MeasurementSetup& setup, ModeId mode) {
    for (int i = 0; i < 4; ++i)
        if (setup.modes[i] == mode) return i;
    return -1;
}

int slot_index(const MeasurementSetup& setup, int freq) {
    for (int s = 0; s < 4; ++s)
        if (setup.slot_freq[s] == freq) return s;
    return -1;
}

const PhotonLabel& photon_label(const BasisKey& key, Photon photon) {
    return (photon == Photon::A) ? key.a : key.b;
}

// Every term must sit on one of the four rails with one of the four lines.
void require_in_space(const PureState& state, Photon photon, const MeasurementSetup& setup) {
    require(photon == Photon::A || state.arity() == 2,
            "single-photon states only carry photon slot A");
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = photon_label(key, photon);
        require(rail_index(setup, label.mode) >= 0 && slot_index(setup, label.freq) >= 0,
                "state support lies outside the analyzer's frequency-rail space");
    }
}

PureState demultiplex_all(const PureState& state, const MeasurementSetup& setup) {
    PureState out = state;
    for (int i = 0; i < 4; ++i) {
        std::map<int, ModeId> routing;
        for (int s = 0; s < 4; ++s) routing[setup.slot_freq[s]] = setup.path[i][s];
        out = demultiplex(out, setup.modes[i], routing);
    }
    return out;
}

// Group carried by path (rail i, slot s): the rail offset relative to the
// slot, which the basis states keep constant across their four terms.
int path_group(int rail, int slot) { return (rail - slot + 4) % 4 + 1; }

PhaseAssignment group_phase_assignment(const MeasurementSetup& setup) {
    PhaseAssignment assignment;
    for (int i = 0; i < 4; ++i)
        for (int s = 0; s < 4; ++s)
            assignment.by_mode[setup.path[i][s]] = kGroupPhases[path_group(i, s) - 1];
    return assignment;
}

struct StageTwoPrepared {
    KerrTagged tagged;
};

StageTwoPrepared stage_two_prepare(const PureState& state, Photon photon,
                                   const MeasurementSetup& setup) {
    PureState mixed = beam_splitter(
        state, {setup.modes[0], setup.modes[1], setup.modes[0], setup.modes[1]});
    mixed = beam_splitter(mixed, {setup.modes[2], setup.modes[3], setup.modes[2], setup.modes[3]});
    PhaseAssignment assignment;
    assignment.by_mode[setup.modes[0]] = kStageTheta1;
    assignment.by_mode[setup.modes[1]] = kStageTheta2;
    assignment.by_mode[setup.modes[2]] = kStageTheta1;
    assignment.by_mode[setup.modes[3]] = kStageTheta2;
    return {kerr_tag_single(mixed, photon, assignment)};
}

// Detector rail -> sign index, per phase class: {theta1: up=1 down=4,
//                                                theta2: up=3 down=2}.
constexpr int kSignIndexOf[2][2] = {{1, 4}, {3, 2}};

PureState stage_two_merge(const PureState& state, const MeasurementSetup& setup) {
    const std::array<ModeId, 2> upper{setup.modes[0], setup.modes[1]};
    const std::array<ModeId, 2> lower{setup.modes[2], setup.modes[3]};
    PureState merged = multiplex(state, upper, setup.out_up);
    merged = multiplex(merged, lower, setup.out_down);
    return beam_splitter(merged,
                         {setup.out_up, setup.out_down, setup.out_up, setup.out_down});
}

}  // namespace

int sign_row_entry(int row, int col) {
    if (row < 1 || row > 4 || col < 0 || col > 3)
        throw std::out_of_range("sign_row_entry: index out of range");
    return kSignRows[row - 1][col];
}

MeasurementSetup measurement_setup(const StandardModes& m, Photon side) {
    MeasurementSetup setup;
    if (side == Photon::A) {
        setup.modes = m.a;
        setup.slot_freq = {1, 2, 4, 8};
        setup.out_up = m.a_up;
        setup.out_down = m.a_down;
    } else {
        setup.modes = m.b;
        setup.slot_freq = {2, 1, 8, 4};
        setup.out_up = m.b_up;
        setup.out_down = m.b_down;
    }
    const auto& table = (side == Photon::A) ? m.a_path : m.b_path;
    for (int i = 0; i < 4; ++i)
        for (int s = 0; s < 4; ++s)
            setup.path[i][s] = table[i][photon_line_index(setup.slot_freq[s])];
    return setup;
}

MeasurementSetup intercept_setup(const StandardModes& m) {
    MeasurementSetup setup;
    setup.modes = m.b;
    setup.slot_freq = {1, 2, 4, 8};
    setup.out_up = m.b_up;
    setup.out_down = m.b_down;
    for (int i = 0; i < 4; ++i)
        for (int s = 0; s < 4; ++s) setup.path[i][s] = m.b_path[i][s];
    return setup;
}

PureState setup_basis_state(const MeasurementSetup& setup,
                            std::shared_ptr<ModeRegistry> registry, int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4)
        throw std::out_of_range("basis_state: indices must be in 1..4");
    std::vector<PureState::Term> terms;
    for (int s = 0; s < 4; ++s) {
        const PhotonLabel label{Polarization::None, static_cast<int16_t>(setup.slot_freq[s]),
                                setup.modes[(s + i - 1) % 4]};
        terms.push_back({BasisKey{label, PhotonLabel::none()},
                         0.5 * sign_row_entry(j, s)});
    }
    return PureState::from_terms(std::move(registry), 1, std::move(terms));
}

PureState basis_state(const StandardModes& m, Photon side, int i, int j) {
    return setup_basis_state(measurement_setup(m, side), m.registry, i, j);
}

PureState phi_state(const MeasurementSetup& setup, std::shared_ptr<ModeRegistry> registry,
                    int j) {
    if (j < 1 || j > 4) throw std::out_of_range("phi_state: index must be in 1..4");
    std::vector<PureState::Term> terms;
    for (int s = 0; s < 4; ++s) {
        const PhotonLabel label{Polarization::None, kErasedFrequency, setup.modes[s]};
        terms.push_back({BasisKey{label, PhotonLabel::none()}, 0.5 * sign_row_entry(j, s)});
    }
    return PureState::from_terms(std::move(registry), 1, std::move(terms));
}

std::array<double, 4> group_weights(const PureState& state, Photon photon,
                                    const MeasurementSetup& setup) {
    require_in_space(state, photon, setup);
    const PureState demuxed = demultiplex_all(state, setup);
    const KerrTagged tagged = kerr_tag_single(demuxed, photon, group_phase_assignment(setup));
    const auto weights = kerr_class_weights(tagged, kGroupPhases);
    return {weights[0], weights[1], weights[2], weights[3]};
}

GroupClassification classify_group(const PureState& state, Photon photon,
                                   const MeasurementSetup& setup, RngStream& rng) {
    require_in_space(state, photon, setup);
    const PureState demuxed = demultiplex_all(state, setup);
    const KerrTagged tagged = kerr_tag_single(demuxed, photon, group_phase_assignment(setup));
    auto readout = kerr_phase_readout(tagged, kGroupPhases, rng);
    return {readout.class_index + 1, std::move(readout.state), readout.probability};
}

PureState freq_erase_to_phi(const PureState& state, Photon photon, const MeasurementSetup& setup,
                            int group) {
    require(group >= 1 && group <= 4, "group index must be in 1..4");
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = photon_label(key, photon);
        bool found = false;
        for (int i = 0; i < 4 && !found; ++i)
            for (int s = 0; s < 4 && !found; ++s)
                if (setup.path[i][s] == label.mode) {
                    require(path_group(i, s) == group,
                            "state is not collapsed onto the stated group");
                    found = true;
                }
        require(found, "state support lies outside the analyzer's demultiplexed paths");
    }
    PureState out = erase_frequency(state, photon, kErasedFrequency);
    for (int s = 0; s < 4; ++s) {
        const std::array<ModeId, 4> column{setup.path[0][s], setup.path[1][s], setup.path[2][s],
                                           setup.path[3][s]};
        out = multiplex(out, column, setup.modes[s]);
    }
    return out;
}

PhiReadout phi_discriminate(const PureState& state, Photon photon, const MeasurementSetup& setup,
                            RngStream& rng) {
    auto prepared = stage_two_prepare(state, photon, setup);
    const std::array<Phase, 2> classes{kStageTheta1, kStageTheta2};
    auto readout = kerr_phase_readout(prepared.tagged, classes, rng);
    PureState merged = stage_two_merge(readout.state, setup);
    auto detection = measure_dof(merged, photon, Dof::SpatialMode, rng);
    const int rail = (detection.value == setup.out_up.v) ? 0 : 1;
    return {kSignIndexOf[readout.class_index][rail], std::move(detection.state),
            readout.probability * detection.probability};
}

DiscriminationResult discriminate(const PureState& state, Photon photon,
                                  const MeasurementSetup& setup, RngStream& rng) {
    auto grouped = classify_group(state, photon, setup, rng);
    PureState folded = freq_erase_to_phi(grouped.state, photon, setup, grouped.group);
    auto phi = phi_discriminate(folded, photon, setup, rng);
    return {{grouped.group, phi.index}, std::move(phi.state),
            grouped.probability * phi.probability};
}

std::array<std::array<double, 4>, 4> discrimination_distribution(const PureState& state,
                                                                 Photon photon,
                                                                 const MeasurementSetup& setup) {
    std::array<std::array<double, 4>, 4> out{};
    require_in_space(state, photon, setup);
    const PureState demuxed = demultiplex_all(state, setup);
    const KerrTagged tagged = kerr_tag_single(demuxed, photon, group_phase_assignment(setup));
    const auto weights = kerr_class_weights(tagged, kGroupPhases);
    for (int g = 0; g < 4; ++g) {
        if (weights[g] <= 0.0) continue;
        auto [collapsed, w_group] = kerr_collapse_class(tagged, kGroupPhases, g);
        const PureState folded = freq_erase_to_phi(collapsed, photon, setup, g + 1);
        auto prepared = stage_two_prepare(folded, photon, setup);
        const std::array<Phase, 2> classes{kStageTheta1, kStageTheta2};
        const auto class_weights = kerr_class_weights(prepared.tagged, classes);
        for (int c = 0; c < 2; ++c) {
            if (class_weights[c] <= 0.0) continue;
            auto [class_state, w_class] = kerr_collapse_class(prepared.tagged, classes, c);
            const PureState merged = stage_two_merge(class_state, setup);
            for (const auto& [rail_value, p] :
                 marginal_distribution(merged, photon, Dof::SpatialMode)) {
                const int rail = (rail_value == setup.out_up.v) ? 0 : 1;
                out[g][kSignIndexOf[c][rail] - 1] += w_group * w_class * p;
            }
        }
    }
    return out;
}

HyperMeasurement measure_hyper(const PureState& state, RngStream& rng) {
    require(state.arity() == 2, "joint readout requires a two-photon state");
    HyperMeasurement result{{}, {}, state};
    for (Photon photon : {Photon::A, Photon::B}) {
        PhotonReadout& readout = (photon == Photon::A) ? result.a : result.b;
        auto spatial = measure_dof(result.state, photon, Dof::SpatialMode, rng);
        readout.mode = ModeId{static_cast<uint16_t>(spatial.value)};
        auto freq = measure_dof(spatial.state, photon, Dof::Frequency, rng);
        readout.freq = freq.value;
        auto pol = measure_dof(freq.state, photon, Dof::Polarization, rng);
        readout.pol = static_cast<Polarization>(pol.value);
        result.state = std::move(pol.state);
    }
    return result;
}

}  // namespace hyperqkd
