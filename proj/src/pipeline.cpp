#include "hyperqkd/pipeline.hpp"

#include <cmath>
#include <numbers>

#include "hyperqkd/optics.hpp"

namespace hyperqkd {

PureState build_pump(const StandardModes& m) {
    PureState beam = PureState::single(m.registry, {Polarization::None, 3, m.pump_top});
    beam = beam_splitter(beam, {m.pump_top, m.pump_bottom, m.pump_top, m.pump_bottom});
    beam = frequency_multiplier(beam, m.pump_top);  // 3 -> 6
    beam = frequency_multiplier(beam, m.pump_top);  // 6 -> 12
    const std::array<ModeId, 2> rails{m.pump_top, m.pump_bottom};
    return multiplex(beam, rails, m.pump_out);
}

PureState generate_pair_state(const StandardModes& m) {
    const PureState pump = build_pump(m);
    const double pass_weight = 1.0 / std::numbers::sqrt2;
    PureState out = PureState::zero(m.registry, 2);
    for (const auto& [key, amp] : pump.terms()) {
        for (int pass = 0; pass < 2; ++pass) {
            const PureState emission =
                spdc_pair(m.registry, key.a.freq, m.src_a[pass], m.src_b[pass]);
            out = superpose(out, emission.scaled(amp * pass_weight));
        }
    }
    return out;
}

PureState split_spatial(const PureState& state, const StandardModes& m) {
    PureState out = state;
    out = beam_splitter(out, {m.src_a[0], m.a[1], m.a[0], m.a[1]});
    out = beam_splitter(out, {m.src_a[1], m.a[3], m.a[2], m.a[3]});
    out = beam_splitter(out, {m.src_b[0], m.b[1], m.b[0], m.b[1]});
    out = beam_splitter(out, {m.src_b[1], m.b[3], m.b[2], m.b[3]});

    // Relative-phase correction making every split coefficient +1. Inputs
    // enter the top port, so the required phases vanish; other wirings would
    // set them here.
    CMatrix correction = CMatrix::identity(8);
    std::array<int, 8> values{};
    for (int i = 0; i < 4; ++i) {
        values[i] = m.a[i].v;
        values[4 + i] = m.b[i].v;
    }
    for (Photon photon : {Photon::A, Photon::B})
        out = apply_mode_unitary(out, photon, Dof::SpatialMode, correction, values);
    return out;
}

GenerationResult generate_hyper_state(const StandardModes& m) {
    GenerationResult result;
    auto checkpoint = [&](std::string stage, const PureState& state, PureState reference) {
        const double f = fidelity(state, reference);
        result.checkpoints.push_back({std::move(stage), state, std::move(reference), f});
    };

    const PureState pump = build_pump(m);
    checkpoint("pump", pump, pump_reference(m));

    const PureState pairs = generate_pair_state(m);
    checkpoint("two_path_pairs", pairs, two_path_pair_state(m));

    const PureState split = split_spatial(pairs, m);
    checkpoint("eight_path", split, eight_path_state(m));

    PhaseAssignment upper, lower;
    upper.by_mode[m.a[0]] = kProbeTheta;     // a11
    upper.by_mode[m.a[2]] = kProbeTheta;     // a21
    upper.by_mode[m.a[1]] = kProbeTwoTheta;  // a12
    upper.by_mode[m.a[3]] = kProbeTwoTheta;  // a22
    lower.by_mode[m.b[0]] = kProbeTheta;
    lower.by_mode[m.b[2]] = kProbeTheta;
    lower.by_mode[m.b[1]] = kProbeTwoTheta;
    lower.by_mode[m.b[3]] = kProbeTwoTheta;
    auto [selected, probability] = kerr_compare_postselect(kerr_tag(split, upper, lower));
    checkpoint("postselected_target", selected, hyper_target_state(m));

    result.state = selected;
    result.success_probability = probability;
    return result;
}

}  // namespace hyperqkd
