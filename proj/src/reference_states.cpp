#include "hyperqkd/reference_states.hpp"

#include "hyperqkd/discrimination.hpp"

namespace hyperqkd {

namespace {

PhotonLabel merge(const PhotonLabel& base, const PhotonLabel& part) {
    PhotonLabel out = base;
    if (part.pol != Polarization::None) out.pol = part.pol;
    if (part.freq != 0) out.freq = part.freq;
    if (part.mode.valid()) out.mode = part.mode;
    return out;
}

}  // namespace

PureState product_state(std::shared_ptr<ModeRegistry> registry, std::span<const Factor> factors) {
    std::vector<PureState::Term> terms{{BasisKey{}, 1.0}};
    for (const Factor& factor : factors) {
        std::vector<PureState::Term> next;
        next.reserve(terms.size() * factor.size());
        for (const auto& [key, amp] : terms)
            for (const PairTerm& part : factor)
                next.push_back({BasisKey{merge(key.a, part.a), merge(key.b, part.b)},
                                amp * part.sign});
        terms = std::move(next);
    }
    return normalize(PureState::from_terms(std::move(registry), 2, std::move(terms))).first;
}

Factor polarization_factor_hv_vh() {
    Factor f;
    f.push_back({{Polarization::H, 0, {}}, {Polarization::V, 0, {}}, 1.0});
    f.push_back({{Polarization::V, 0, {}}, {Polarization::H, 0, {}}, 1.0});
    return f;
}

Factor frequency_factor_conjugate_pairs() {
    Factor f;
    for (int line : kPhotonLines) {
        f.push_back({{Polarization::None, static_cast<int16_t>(line), {}},
                     {Polarization::None, static_cast<int16_t>(conjugate_frequency(line)), {}},
                     1.0});
    }
    return f;
}

Factor mode_factor(std::span<const std::pair<ModeId, ModeId>> pairs,
                   std::span<const double> signs) {
    Factor f;
    for (size_t i = 0; i < pairs.size(); ++i) {
        const double sign = signs.empty() ? 1.0 : signs[i];
        f.push_back({{Polarization::None, 0, pairs[i].first},
                     {Polarization::None, 0, pairs[i].second},
                     sign});
    }
    return f;
}

PureState pump_reference(const StandardModes& m) {
    const double h = 1.0 / std::numbers::sqrt2;
    std::vector<PureState::Term> terms{
        {BasisKey{{Polarization::None, 3, m.pump_out}, PhotonLabel::none()}, h},
        {BasisKey{{Polarization::None, 12, m.pump_out}, PhotonLabel::none()}, h}};
    return PureState::from_terms(m.registry, 1, std::move(terms));
}

PureState two_path_pair_state(const StandardModes& m) {
    const std::vector<std::pair<ModeId, ModeId>> paths{{m.src_a[0], m.src_b[0]},
                                                       {m.src_a[1], m.src_b[1]}};
    const std::vector<Factor> factors{polarization_factor_hv_vh(),
                                      frequency_factor_conjugate_pairs(), mode_factor(paths)};
    return product_state(m.registry, factors);
}

PureState eight_path_state(const StandardModes& m) {
    std::vector<std::pair<ModeId, ModeId>> paths;
    for (int block : {0, 2})
        for (int i : {block, block + 1})
            for (int j : {block, block + 1}) paths.push_back({m.a[i], m.b[j]});
    const std::vector<Factor> factors{polarization_factor_hv_vh(),
                                      frequency_factor_conjugate_pairs(), mode_factor(paths)};
    return product_state(m.registry, factors);
}

PureState hyper_target_state(const StandardModes& m) {
    std::vector<std::pair<ModeId, ModeId>> paths;
    for (int i = 0; i < 4; ++i) paths.push_back({m.a[i], m.b[i]});
    const std::vector<Factor> factors{polarization_factor_hv_vh(),
                                      frequency_factor_conjugate_pairs(), mode_factor(paths)};
    return product_state(m.registry, factors);
}

PureState freq_spatial_pair_state(const StandardModes& m) {
    std::vector<std::pair<ModeId, ModeId>> paths;
    for (int i = 0; i < 4; ++i) paths.push_back({m.a[i], m.b[i]});
    const std::vector<Factor> factors{frequency_factor_conjugate_pairs(), mode_factor(paths)};
    return product_state(m.registry, factors);
}

PureState spatial_bell_state(const StandardModes& m, int k) {
    if (k < 1 || k > 16) throw std::out_of_range("spatial_bell_state: k must be in 1..16");
    const int shift = (k - 1) / 4;
    const int row = (k - 1) % 4 + 1;
    std::vector<std::pair<ModeId, ModeId>> paths;
    std::vector<double> signs;
    for (int q = 0; q < 4; ++q) {
        paths.push_back({m.a[q], m.b[(q + shift) % 4]});
        signs.push_back(static_cast<double>(sign_row_entry(row, q)));
    }
    const std::vector<Factor> factors{mode_factor(paths, signs)};
    return product_state(m.registry, factors);
}

}  // namespace hyperqkd
