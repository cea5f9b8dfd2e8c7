#include "hyperqkd/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperqkd {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

Phase lookup_phase(const PhaseAssignment& assignment, ModeId mode, const char* msg) {
    auto it = assignment.by_mode.find(mode);
    if (it == assignment.by_mode.end()) throw std::invalid_argument(msg);
    return it->second;
}

}  // namespace

double Phase::radians() const {
    return std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
}

CMatrix beam_splitter_matrix() {
    const double h = 1.0 / std::numbers::sqrt2;
    CMatrix m(2);
    m.at(0, 0) = h;
    m.at(0, 1) = h;
    m.at(1, 0) = h;
    m.at(1, 1) = -h;
    return m;
}

PureState beam_splitter(const PureState& state, const BeamSplitterSpec& spec) {
    const auto& reg = *state.registry();
    for (ModeId mode : {spec.in_top, spec.in_bottom, spec.out_top, spec.out_bottom})
        require(mode.valid() && mode.v < reg.size(), "beam splitter references an unregistered mode");
    require(spec.in_top != spec.in_bottom && spec.out_top != spec.out_bottom,
            "beam splitter ports must be distinct");

    const std::array<int, 2> values{spec.in_top.v, spec.in_bottom.v};
    PureState mixed = state;
    for (Photon photon : {Photon::A, Photon::B}) {
        if (photon == Photon::B && state.arity() == 1) break;
        mixed = apply_mode_unitary(mixed, photon, Dof::SpatialMode, beam_splitter_matrix(), values);
    }
    if (spec.out_top == spec.in_top && spec.out_bottom == spec.in_bottom) return mixed;
    return transform_labels(mixed, [&](const BasisKey& key) {
        BasisKey next = key;
        for (PhotonLabel* label : {&next.a, &next.b}) {
            if (label->mode == spec.in_top) label->mode = spec.out_top;
            else if (label->mode == spec.in_bottom) label->mode = spec.out_bottom;
        }
        return next;
    });
}

PureState frequency_multiplier(const PureState& state, ModeId mode) {
    return transform_labels(state, [&](const BasisKey& key) {
        BasisKey next = key;
        for (PhotonLabel* label : {&next.a, &next.b}) {
            if (label->mode != mode) continue;
            const int doubled = 2 * label->freq;
            if (!frequency_is_valid(doubled))
                throw std::invalid_argument("frequency multiplier: doubled value is not registered");
            label->freq = static_cast<int16_t>(doubled);
        }
        return next;
    });
}

PureState spdc_pair(std::shared_ptr<ModeRegistry> registry, int pump_freq, ModeId mode_a,
                    ModeId mode_b) {
    int signal = 0, idler = 0;
    if (pump_freq == 3) {
        signal = 1;
        idler = 2;
    } else if (pump_freq == 12) {
        signal = 4;
        idler = 8;
    } else {
        throw std::invalid_argument("spdc_pair: pump frequency must be 3 or 12");
    }

    std::vector<PureState::Term> terms;
    for (Polarization pol_a : {Polarization::H, Polarization::V}) {
        const Polarization pol_b = (pol_a == Polarization::H) ? Polarization::V : Polarization::H;
        for (auto [fa, fb] : {std::pair{signal, idler}, std::pair{idler, signal}}) {
            terms.push_back({BasisKey{{pol_a, static_cast<int16_t>(fa), mode_a},
                                      {pol_b, static_cast<int16_t>(fb), mode_b}},
                             0.5});
        }
    }
    return PureState::from_terms(std::move(registry), 2, std::move(terms));
}

KerrTagged kerr_tag(const PureState& state, const PhaseAssignment& upper,
                    const PhaseAssignment& lower) {
    require(state.arity() == 2, "two-arm probe tagging requires a two-photon state");
    KerrTagged tagged{state, 1.0, {}};
    tagged.tags.reserve(state.support_size());
    for (const auto& [key, amp] : state.terms()) {
        tagged.tags.emplace_back(
            lookup_phase(upper, key.a.mode, "probe assignment does not cover photon A's path"),
            lookup_phase(lower, key.b.mode, "probe assignment does not cover photon B's path"));
    }
    return tagged;
}

KerrTagged kerr_tag_single(const PureState& state, Photon photon,
                           const PhaseAssignment& assignment) {
    require(photon == Photon::A || state.arity() == 2,
            "single-photon states only carry photon slot A");
    KerrTagged tagged{state, 1.0, {}};
    tagged.tags.reserve(state.support_size());
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = (photon == Photon::A) ? key.a : key.b;
        tagged.tags.emplace_back(
            lookup_phase(assignment, label.mode, "probe assignment does not cover the photon's path"),
            Phase{});
    }
    return tagged;
}

std::pair<PureState, double> kerr_compare_postselect(const KerrTagged& tagged) {
    require(tagged.state.is_normalized(), "post-selection requires a normalized state");
    std::vector<PureState::Term> kept;
    double weight = 0.0;
    const auto terms = tagged.state.terms();
    for (size_t i = 0; i < terms.size(); ++i) {
        if (tagged.tags[i].first != tagged.tags[i].second) continue;
        kept.push_back(terms[i]);
        weight += std::norm(terms[i].second);
    }
    if (kept.empty())
        throw PostSelectionFailure("probe comparison left no surviving terms");
    auto [state, n] =
        normalize(PureState::from_terms(tagged.state.registry(), tagged.state.arity(), std::move(kept)));
    return {std::move(state), weight};
}

namespace {

int class_of(const Phase& tag, std::span<const Phase> classes) {
    int found = -1;
    for (size_t c = 0; c < classes.size(); ++c) {
        if (classes[c] != tag) continue;
        if (found >= 0) throw std::invalid_argument("probe phase classes overlap");
        found = static_cast<int>(c);
    }
    if (found < 0) throw std::invalid_argument("probe tag lies outside every phase class");
    return found;
}

}  // namespace

std::vector<double> kerr_class_weights(const KerrTagged& tagged, std::span<const Phase> classes) {
    require(tagged.state.is_normalized(), "phase readout requires a normalized state");
    std::vector<double> weights(classes.size(), 0.0);
    const auto terms = tagged.state.terms();
    for (size_t i = 0; i < terms.size(); ++i)
        weights[class_of(tagged.tags[i].first, classes)] += std::norm(terms[i].second);
    return weights;
}

std::pair<PureState, double> kerr_collapse_class(const KerrTagged& tagged,
                                                 std::span<const Phase> classes, int index) {
    std::vector<PureState::Term> kept;
    double weight = 0.0;
    const auto terms = tagged.state.terms();
    for (size_t i = 0; i < terms.size(); ++i) {
        if (class_of(tagged.tags[i].first, classes) != index) continue;
        kept.push_back(terms[i]);
        weight += std::norm(terms[i].second);
    }
    auto [state, n] =
        normalize(PureState::from_terms(tagged.state.registry(), tagged.state.arity(), std::move(kept)));
    return {std::move(state), weight};
}

PhaseReadout kerr_phase_readout(const KerrTagged& tagged, std::span<const Phase> classes,
                                RngStream& rng) {
    const auto weights = kerr_class_weights(tagged, classes);
    const int pick = rng.sample(weights);
    auto [state, weight] = kerr_collapse_class(tagged, classes, pick);
    return {pick, std::move(state), weight};
}

PureState demultiplex(const PureState& state, ModeId mode, const std::map<int, ModeId>& routing) {
    return transform_labels(state, [&](const BasisKey& key) {
        BasisKey next = key;
        for (PhotonLabel* label : {&next.a, &next.b}) {
            if (label->mode != mode) continue;
            auto it = routing.find(label->freq);
            if (it == routing.end())
                throw std::invalid_argument("demultiplexer routing misses a present frequency");
            label->mode = it->second;
        }
        return next;
    });
}

PureState multiplex(const PureState& state, std::span<const ModeId> sources, ModeId target) {
    return transform_labels(state, [&](const BasisKey& key) {
        BasisKey next = key;
        for (PhotonLabel* label : {&next.a, &next.b}) {
            if (std::find(sources.begin(), sources.end(), label->mode) != sources.end())
                label->mode = target;
        }
        return next;
    });
}

PureState erase_frequency(const PureState& state, Photon photon, int target_freq) {
    require(frequency_is_valid(target_freq), "erase_frequency: invalid target frequency");
    require(photon == Photon::A || state.arity() == 2,
            "single-photon states only carry photon slot A");
    return transform_labels(state, [&](const BasisKey& key) {
        BasisKey next = key;
        PhotonLabel& label = (photon == Photon::A) ? next.a : next.b;
        label.freq = static_cast<int16_t>(target_freq);
        return next;
    });
}

PolarizationResult polarization_measure(const PureState& state, Photon photon, RngStream& rng) {
    auto result = measure_dof(state, photon, Dof::Polarization, rng);
    return {static_cast<Polarization>(result.value), std::move(result.state),
            result.probability};
}

}  // namespace hyperqkd
