#include "hyperqkd/state.hpp"

#include <algorithm>
#include <cmath>

namespace hyperqkd {

namespace {

constexpr std::array<int, 7> kValidFrequencies{1, 2, 3, 4, 6, 8, 12};

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

bool frequency_is_valid(int f) {
    return std::find(kValidFrequencies.begin(), kValidFrequencies.end(), f) !=
           kValidFrequencies.end();
}

bool frequency_is_photon_line(int f) {
    return std::find(kPhotonLines.begin(), kPhotonLines.end(), f) != kPhotonLines.end();
}

int conjugate_frequency(int f) {
    switch (f) {
        case 1: return 2;
        case 2: return 1;
        case 4: return 8;
        case 8: return 4;
        default: throw std::invalid_argument("conjugate_frequency: not a photon line");
    }
}

int photon_line_index(int f) {
    for (size_t i = 0; i < kPhotonLines.size(); ++i)
        if (kPhotonLines[i] == f) return static_cast<int>(i);
    throw std::invalid_argument("photon_line_index: not a photon line");
}

ModeId ModeRegistry::add(std::string name) {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    if (names_.size() >= 0xFFFF) throw std::length_error("ModeRegistry: too many modes");
    ModeId id{static_cast<uint16_t>(names_.size())};
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    return id;
}

std::optional<ModeId> ModeRegistry::find(std::string_view name) const {
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    return std::nullopt;
}

const std::string& ModeRegistry::name(ModeId id) const {
    if (!id.valid() || id.v >= names_.size())
        throw std::invalid_argument("ModeRegistry: unknown mode id");
    return names_[id.v];
}

int dof_value(const PhotonLabel& label, Dof dof) {
    switch (dof) {
        case Dof::Polarization: return static_cast<int>(label.pol);
        case Dof::Frequency: return label.freq;
        case Dof::SpatialMode: return label.mode.v;
    }
    throw std::invalid_argument("dof_value: bad dof");
}

PhotonLabel with_dof_value(PhotonLabel label, Dof dof, int value) {
    switch (dof) {
        case Dof::Polarization: label.pol = static_cast<Polarization>(value); break;
        case Dof::Frequency: label.freq = static_cast<int16_t>(value); break;
        case Dof::SpatialMode: label.mode = ModeId{static_cast<uint16_t>(value)}; break;
    }
    return label;
}

// --- PureState ----------------------------------------------------------

namespace {

void validate_label(const PhotonLabel& l, const ModeRegistry& reg) {
    require(l.mode.valid() && l.mode.v < reg.size(), "state references an unregistered mode");
    require(l.freq == 0 || frequency_is_valid(l.freq), "state carries an invalid frequency");
}

}  // namespace

PureState PureState::zero(std::shared_ptr<ModeRegistry> registry, int arity) {
    return from_terms(std::move(registry), arity, {});
}

PureState PureState::single(std::shared_ptr<ModeRegistry> registry, PhotonLabel label, Cx amp) {
    return from_terms(std::move(registry), 1, {{BasisKey{label, PhotonLabel::none()}, amp}});
}

PureState PureState::pair(std::shared_ptr<ModeRegistry> registry, PhotonLabel a, PhotonLabel b,
                          Cx amp) {
    return from_terms(std::move(registry), 2, {{BasisKey{a, b}, amp}});
}

PureState PureState::from_terms(std::shared_ptr<ModeRegistry> registry, int arity,
                                std::vector<Term> terms) {
    require(registry != nullptr, "state requires a registry");
    require(arity == 1 || arity == 2, "state arity must be 1 or 2");
    for (const auto& [key, amp] : terms) {
        validate_label(key.a, *registry);
        if (arity == 2) {
            validate_label(key.b, *registry);
        } else {
            require(key.b == PhotonLabel::none(),
                    "single-photon state must leave the second slot empty");
        }
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first) {
            merged.back().second += t.second;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Term& t) { return std::abs(t.second) < kAmplitudeFloor; });

    PureState s;
    s.arity_ = arity;
    s.registry_ = std::move(registry);
    s.terms_ = std::move(merged);
    return s;
}

Cx PureState::amplitude(const BasisKey& key) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, const BasisKey& k) { return t.first < k; });
    if (it != terms_.end() && it->first == key) return it->second;
    return {};
}

double PureState::norm() const {
    double sum = 0.0;
    for (const auto& [key, amp] : terms_) sum += std::norm(amp);
    return std::sqrt(sum);
}

bool PureState::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

PureState PureState::scaled(Cx factor) const {
    std::vector<Term> out = terms_;
    for (auto& [key, amp] : out) amp *= factor;
    return from_terms(registry_, arity_, std::move(out));
}

// --- CMatrix ------------------------------------------------------------

CMatrix CMatrix::identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) out.at(r, c) = std::conj(at(c, r));
    return out;
}

CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("matrix dimension mismatch");
    CMatrix out(x.dim());
    for (int r = 0; r < x.dim(); ++r)
        for (int k = 0; k < x.dim(); ++k) {
            const Cx v = x.at(r, k);
            if (v == Cx{}) continue;
            for (int c = 0; c < x.dim(); ++c) out.at(r, c) += v * y.at(k, c);
        }
    return out;
}

bool CMatrix::is_unitary(double tol) const {
    const CMatrix product = adjoint() * (*this);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            const Cx expect = (r == c) ? Cx{1.0} : Cx{};
            if (std::abs(product.at(r, c) - expect) > tol) return false;
        }
    return true;
}

// --- Operations ----------------------------------------------------------

namespace {

void require_same_registry(const PureState& a, const PureState& b) {
    require(a.registry() == b.registry(), "states belong to different registries");
}

}  // namespace

PureState tensor(const PureState& a, const PureState& b) {
    require(a.arity() == 1 && b.arity() == 1, "tensor requires two single-photon states");
    require_same_registry(a, b);
    std::vector<PureState::Term> out;
    out.reserve(a.support_size() * b.support_size());
    for (const auto& [ka, va] : a.terms())
        for (const auto& [kb, vb] : b.terms())
            out.push_back({BasisKey{ka.a, kb.a}, va * vb});
    return PureState::from_terms(a.registry(), 2, std::move(out));
}

PureState superpose(const PureState& a, const PureState& b) {
    require(a.arity() == b.arity(), "superpose requires equal arity");
    require_same_registry(a, b);
    std::vector<PureState::Term> out(a.terms().begin(), a.terms().end());
    out.insert(out.end(), b.terms().begin(), b.terms().end());
    return PureState::from_terms(a.registry(), a.arity(), std::move(out));
}

Cx inner_product(const PureState& a, const PureState& b) {
    require(a.arity() == b.arity(), "inner product requires equal arity");
    require_same_registry(a, b);
    Cx sum{};
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    while (ia != a.terms().end() && ib != b.terms().end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            sum += std::conj(ia->second) * ib->second;
            ++ia;
            ++ib;
        }
    }
    return sum;
}

double fidelity(const PureState& a, const PureState& b) {
    require(a.is_normalized() && b.is_normalized(), "fidelity requires normalized states");
    return std::norm(inner_product(a, b));
}

std::pair<PureState, double> normalize(const PureState& state) {
    const double n = state.norm();
    if (n <= 0.0) throw std::domain_error("cannot normalize the zero state");
    return {state.scaled(1.0 / n), n};
}

PureState apply_mode_unitary(const PureState& state, Photon photon, Dof dof, const CMatrix& u,
                             std::span<const int> values) {
    require(photon == Photon::A || state.arity() == 2,
            "single-photon states only carry photon slot A");
    require(u.dim() == static_cast<int>(values.size()),
            "matrix dimension must match the DOF value list");
    require(u.is_unitary(), "element transform is not unitary");
    std::map<int, int> column;
    for (size_t i = 0; i < values.size(); ++i) {
        switch (dof) {
            case Dof::Polarization:
                require(values[i] == 0 || values[i] == 1,
                        "polarization values must be H or V");
                break;
            case Dof::Frequency:
                require(frequency_is_valid(values[i]), "listed frequency is not registered");
                break;
            case Dof::SpatialMode:
                require(values[i] >= 0 &&
                            values[i] < static_cast<int>(state.registry()->size()),
                        "listed mode is not registered");
                break;
        }
        auto [it, inserted] = column.emplace(values[i], static_cast<int>(i));
        require(inserted, "listed DOF values must be distinct");
    }

    std::vector<PureState::Term> out;
    out.reserve(state.support_size() * values.size());
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = (photon == Photon::A) ? key.a : key.b;
        auto it = column.find(dof_value(label, dof));
        if (it == column.end()) {
            out.push_back({key, amp});
            continue;
        }
        const int col = it->second;
        for (int row = 0; row < u.dim(); ++row) {
            const Cx coeff = u.at(row, col);
            if (coeff == Cx{}) continue;
            BasisKey next = key;
            PhotonLabel rewritten = with_dof_value(label, dof, values[row]);
            (photon == Photon::A ? next.a : next.b) = rewritten;
            out.push_back({next, amp * coeff});
        }
    }
    return PureState::from_terms(state.registry(), state.arity(), std::move(out));
}

std::map<int, double> marginal_distribution(const PureState& state, Photon photon, Dof dof) {
    require(state.is_normalized(), "marginal distribution requires a normalized state");
    require(photon == Photon::A || state.arity() == 2,
            "single-photon states only carry photon slot A");
    std::map<int, double> probs;
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = (photon == Photon::A) ? key.a : key.b;
        probs[dof_value(label, dof)] += std::norm(amp);
    }
    return probs;
}

PureState transform_labels(const PureState& state,
                           const std::function<BasisKey(const BasisKey&)>& fn) {
    std::vector<PureState::Term> out;
    out.reserve(state.support_size());
    for (const auto& [key, amp] : state.terms()) out.push_back({fn(key), amp});
    PureState result = PureState::from_terms(state.registry(), state.arity(), std::move(out));
    require(result.support_size() == state.support_size(),
            "label rewrite collides distinct labels");
    return result;
}

PureState project_photon(const PureState& state, Photon which, const PureState& single) {
    require(state.arity() == 2, "projection requires a two-photon state");
    require(single.arity() == 1, "projector must be a single-photon state");
    require_same_registry(state, single);
    std::vector<PureState::Term> out;
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& probe = (which == Photon::A) ? key.a : key.b;
        const Cx weight = single.amplitude(BasisKey{probe, PhotonLabel::none()});
        if (weight == Cx{}) continue;
        const PhotonLabel& rest = (which == Photon::A) ? key.b : key.a;
        out.push_back({BasisKey{rest, PhotonLabel::none()}, std::conj(weight) * amp});
    }
    return PureState::from_terms(state.registry(), 1, std::move(out));
}

PureState single_photon_part(const PureState& state, Photon keep) {
    require(state.arity() == 2, "single_photon_part requires a two-photon state");
    require(!state.empty(), "single_photon_part of the zero state");
    const Photon other = (keep == Photon::A) ? Photon::B : Photon::A;
    const PhotonLabel& anchor =
        (other == Photon::A) ? state.terms()[0].first.a : state.terms()[0].first.b;
    std::vector<PureState::Term> out;
    out.reserve(state.support_size());
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& fixed = (other == Photon::A) ? key.a : key.b;
        require(fixed == anchor, "discarded photon is not a point mass");
        const PhotonLabel& kept = (keep == Photon::A) ? key.a : key.b;
        out.push_back({BasisKey{kept, PhotonLabel::none()}, amp});
    }
    return PureState::from_terms(state.registry(), 1, std::move(out));
}

PureState project_dof_value(const PureState& state, Photon photon, Dof dof, int value) {
    std::vector<PureState::Term> out;
    for (const auto& [key, amp] : state.terms()) {
        const PhotonLabel& label = (photon == Photon::A) ? key.a : key.b;
        if (dof_value(label, dof) == value) out.push_back({key, amp});
    }
    return PureState::from_terms(state.registry(), state.arity(), std::move(out));
}

DofMeasurement measure_dof(const PureState& state, Photon photon, Dof dof, RngStream& rng) {
    const auto marginal = marginal_distribution(state, photon, dof);
    std::vector<int> values;
    std::vector<double> weights;
    values.reserve(marginal.size());
    weights.reserve(marginal.size());
    for (const auto& [value, p] : marginal) {
        values.push_back(value);
        weights.push_back(p);
    }
    const int pick = rng.sample(weights);
    auto [collapsed, n] = normalize(project_dof_value(state, photon, dof, values[pick]));
    return {values[pick], std::move(collapsed), weights[pick]};
}

}  // namespace hyperqkd
