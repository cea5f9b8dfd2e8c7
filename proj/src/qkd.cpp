#include "hyperqkd/qkd.hpp"

#include <algorithm>
#include <cmath>

namespace hyperqkd {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Per-round substream purposes.
enum : uint64_t { kStreamChoice = 0, kStreamAlice = 1, kStreamEve = 2, kStreamBob = 3 };

RngStream round_stream(uint64_t seed, int round, uint64_t purpose) {
    return RngStream(seed, static_cast<uint64_t>(round) * 4 + purpose);
}

}  // namespace

std::string encoding(int k) {
    if (k < 1 || k > 16) throw std::out_of_range("encoding: k must be in 1..16");
    std::string bits(4, '0');
    for (int b = 0; b < 4; ++b)
        if ((k - 1) & (1 << (3 - b))) bits[b] = '1';
    return bits;
}

int decoding(std::string_view bits) {
    if (bits.size() != 4) throw std::invalid_argument("decoding: expected 4 bits");
    int value = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("decoding: expected 0/1 bits");
        value = value * 2 + (c - '0');
    }
    return value + 1;
}

int outcome_to_index(const DiscriminationOutcome& o) {
    if (o.group < 1 || o.group > 4 || o.index < 1 || o.index > 4)
        throw std::out_of_range("outcome indices must be in 1..4");
    return (o.group - 1) * 4 + (o.index - 1);
}

DiscriminationOutcome outcome_from_index(int index) {
    if (index < 0 || index > 15) throw std::out_of_range("outcome index must be in 0..15");
    return {index / 4 + 1, index % 4 + 1};
}

std::string outcome_bits(const DiscriminationOutcome& o) {
    const int index = outcome_to_index(o);
    std::string bits(4, '0');
    for (int b = 0; b < 4; ++b)
        if (index & (1 << (3 - b))) bits[b] = '1';
    return bits;
}

CMatrix sigma_from_factors(int shift, int sign_row) {
    if (shift < 0 || shift > 3 || sign_row < 1 || sign_row > 4)
        throw std::out_of_range("sigma factors out of range");
    CMatrix u(4);
    for (int q = 0; q < 4; ++q) {
        const int p = (q + 4 - shift) % 4;
        u.at(p, q) = static_cast<double>(sign_row_entry(sign_row, p));
    }
    return u;
}

SigmaOp sigma_unitary(const StandardModes& m, int k) {
    if (k < 1 || k > 16) throw std::out_of_range("sigma_unitary: k must be in 1..16");
    const PureState target = spatial_bell_state(m, k);

    // The plain paired state has uniform amplitude 1/2, so the matrix entry
    // is twice the target amplitude on each (a rail, b rail) label.
    CMatrix u(4);
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            const BasisKey key{{Polarization::None, 0, m.a[p]},
                               {Polarization::None, 0, m.b[q]}};
            u.at(p, q) = 2.0 * target.amplitude(key);
        }
    if (!u.is_unitary())
        throw std::logic_error("derived spatial operation is not unitary");

    std::array<int, 4> rails{};
    for (int i = 0; i < 4; ++i) rails[i] = m.a[i].v;
    const PureState mapped =
        apply_mode_unitary(spatial_bell_state(m, 1), Photon::A, Dof::SpatialMode, u, rails);
    if (fidelity(mapped, target) < 1.0 - 1e-12)
        throw std::logic_error("derived spatial operation misses its target state");
    return {k, std::move(u), encoding(k)};
}

SigmaFactors decompose_sigma(const StandardModes& m, int k) {
    const SigmaOp op = sigma_unitary(m, k);
    const SigmaFactors factors{(k - 1) / 4, (k - 1) % 4 + 1};
    const CMatrix recomposed = sigma_from_factors(factors.shift, factors.sign_row);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            if (std::abs(op.u.at(r, c) - recomposed.at(r, c)) > kUnitaryTol)
                throw std::logic_error("sign-shift factorization does not recompose");
    return factors;
}

DiscriminationOutcome CorrelationTable::bob(int k, const DiscriminationOutcome& alice) const {
    if (k < 1 || k > 16) throw std::out_of_range("correlation table: k must be in 1..16");
    return outcome_from_index(bob_of_[k - 1][outcome_to_index(alice)]);
}

std::optional<int> CorrelationTable::infer_k(const DiscriminationOutcome& alice,
                                             const DiscriminationOutcome& bob) const {
    const int8_t k = k_of_[outcome_to_index(alice)][outcome_to_index(bob)];
    if (k < 0) return std::nullopt;
    return static_cast<int>(k);
}

QkdSetup QkdSetup::make() {
    QkdSetup setup{standard_modes(), {}, {}, {}, {}, {}, {}, {}, {}};
    setup.alice_setup = measurement_setup(setup.modes, Photon::A);
    setup.bob_setup = measurement_setup(setup.modes, Photon::B);
    setup.eve_setup = intercept_setup(setup.modes);
    setup.fresh = freq_spatial_pair_state(setup.modes);
    for (int k = 1; k <= 16; ++k) setup.sigmas[k - 1] = sigma_unitary(setup.modes, k);
    for (int o = 0; o < 16; ++o) {
        const DiscriminationOutcome outcome = outcome_from_index(o);
        setup.alice_basis[o] = basis_state(setup.modes, Photon::A, outcome.group, outcome.index);
        setup.bob_basis[o] = basis_state(setup.modes, Photon::B, outcome.group, outcome.index);
    }

    std::array<int, 4> rails{};
    for (int i = 0; i < 4; ++i) rails[i] = setup.modes.a[i].v;
    for (auto& row : setup.table.k_of_) row.fill(-1);
    for (int k = 1; k <= 16; ++k) {
        const PureState rotated = apply_mode_unitary(setup.fresh, Photon::A, Dof::SpatialMode,
                                                     setup.sigmas[k - 1].u, rails);
        for (int o = 0; o < 16; ++o) {
            auto [conditional, weight] =
                normalize(project_photon(rotated, Photon::A, setup.alice_basis[o]));
            int match = -1;
            for (int bo = 0; bo < 16; ++bo) {
                if (std::norm(inner_product(setup.bob_basis[bo], conditional)) > 0.5) {
                    match = bo;
                    break;
                }
            }
            if (match < 0 ||
                std::norm(inner_product(setup.bob_basis[match], conditional)) < 1.0 - 1e-12)
                throw std::logic_error("conditional state is not a single basis state");
            setup.table.bob_of_[k - 1][o] = static_cast<uint8_t>(match);
            if (setup.table.k_of_[o][match] >= 0)
                throw std::logic_error("correlation table is not injective in k");
            setup.table.k_of_[o][match] = static_cast<int8_t>(k);
        }
    }
    return setup;
}

const SigmaOp& QkdSetup::sigma(int k) const {
    if (k < 1 || k > 16) throw std::out_of_range("sigma: k must be in 1..16");
    return sigmas[k - 1];
}

std::array<Cx, 16> swap_basis_coefficients(const QkdSetup& setup, const PureState& state) {
    require(state.arity() == 2, "coefficient decomposition requires a two-photon state");
    std::array<Cx, 16> coeffs{};
    for (int o = 0; o < 16; ++o) {
        const PureState product = tensor(setup.alice_basis[o], setup.bob_basis[o]);
        coeffs[o] = inner_product(product, state);
    }
    return coeffs;
}

PureState swap_basis_reconstruction(const QkdSetup& setup, std::span<const Cx, 16> coeffs) {
    PureState out = PureState::zero(setup.modes.registry, 2);
    for (int o = 0; o < 16; ++o) {
        if (coeffs[o] == Cx{}) continue;
        out = superpose(out, tensor(setup.alice_basis[o], setup.bob_basis[o]).scaled(coeffs[o]));
    }
    return out;
}

AliceRound alice_round(const QkdSetup& setup, RngStream& rng, int k, int round_id) {
    std::array<int, 4> rails{};
    for (int i = 0; i < 4; ++i) rails[i] = setup.modes.a[i].v;
    const PureState rotated = apply_mode_unitary(setup.fresh, Photon::A, Dof::SpatialMode,
                                                 setup.sigma(k).u, rails);
    auto measured = discriminate(rotated, Photon::A, setup.alice_setup, rng);
    PureState photon_b = single_photon_part(measured.state, Photon::B);
    return {measured.outcome, std::move(photon_b), {round_id, measured.outcome}};
}

BobRound bob_round(const QkdSetup& setup, const PureState& photon_b,
                   const ClassicalMessage& message, RngStream& rng) {
    if (message.alice.group < 1 || message.alice.group > 4 || message.alice.index < 1 ||
        message.alice.index > 4)
        throw ProtocolError("malformed classical message");
    auto measured = discriminate(photon_b, Photon::A, setup.bob_setup, rng);
    const auto inferred = setup.table.infer_k(message.alice, measured.outcome);
    if (!inferred)
        throw ProtocolError("outcome pair is outside the correlation table");
    return {measured.outcome, *inferred, encoding(*inferred), outcome_bits(message.alice)};
}

PureState eve_intercept_resend(const QkdSetup& setup, const PureState& photon_b,
                               RngStream& rng) {
    auto measured = discriminate(photon_b, Photon::A, setup.eve_setup, rng);
    return setup_basis_state(setup.eve_setup, setup.modes.registry, measured.outcome.group,
                             measured.outcome.index);
}

SessionResult run_session(const QkdSetup& setup, const SessionConfig& config) {
    require(config.rounds >= 1, "session needs at least one round");
    require(config.eve_probability >= 0.0 && config.eve_probability <= 1.0,
            "eve probability must lie in [0,1]");

    SessionResult result;
    result.config = config;
    result.records.reserve(config.rounds);
    result.stats.rounds = config.rounds;

    for (int round = 1; round <= config.rounds; ++round) {
        RngStream choice = round_stream(config.seed, round, kStreamChoice);
        RngStream alice_rng = round_stream(config.seed, round, kStreamAlice);
        RngStream eve_rng = round_stream(config.seed, round, kStreamEve);
        RngStream bob_rng = round_stream(config.seed, round, kStreamBob);

        const int k = choice.uniform_int(1, 16);
        AliceRound alice = alice_round(setup, alice_rng, k, round);

        PureState in_flight = alice.photon_b;
        if (eve_rng.uniform() < config.eve_probability)
            in_flight = eve_intercept_resend(setup, in_flight, eve_rng);

        BobRound bob = bob_round(setup, in_flight, alice.message, bob_rng);

        RoundRecord record{round,           k,
                           alice.outcome,   bob.outcome,
                           bob.inferred_k,  encoding(k),
                           bob.random_bits, bob.inferred_k != k};
        result.key.determinate += record.determinate_bits;
        result.key.random += record.random_bits;
        result.stats.errors += record.error ? 1 : 0;
        result.stats.k_counts[k - 1] += 1;
        result.stats.random_value_counts[outcome_to_index(alice.outcome)] += 1;
        result.stats.key_bits += 8;
        result.records.push_back(std::move(record));
    }
    result.stats.error_rate =
        static_cast<double>(result.stats.errors) / static_cast<double>(config.rounds);
    result.stats.chi_square_random = chi_square_uniform(result.stats.random_value_counts);
    return result;
}

double chi_square_uniform(std::span<const int> counts) {
    require(!counts.empty(), "chi-square needs at least one bin");
    long long total = 0;
    for (int c : counts) total += c;
    require(total > 0, "chi-square needs at least one sample");
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double chi = 0.0;
    for (int c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi += d * d / expected;
    }
    return chi;
}

}  // namespace hyperqkd
