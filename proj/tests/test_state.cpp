#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hyperqkd/modes.hpp"
#include "hyperqkd/optics.hpp"
#include "hyperqkd/pipeline.hpp"
#include "test_util.hpp"

using namespace hyperqkd;
using testutil::gaussian;

namespace {

PhotonLabel label(Polarization pol, int freq, ModeId mode) {
    return {pol, static_cast<int16_t>(freq), mode};
}

std::vector<PhotonLabel> pool_a(const StandardModes& m) {
    std::vector<PhotonLabel> labels;
    for (int i = 0; i < 4; ++i)
        for (int f : kPhotonLines) labels.push_back(label(Polarization::None, f, m.a[i]));
    return labels;
}

std::vector<PhotonLabel> pool_b(const StandardModes& m) {
    std::vector<PhotonLabel> labels;
    for (int i = 0; i < 4; ++i)
        for (int f : kPhotonLines) labels.push_back(label(Polarization::None, f, m.b[i]));
    return labels;
}

}  // namespace

TEST_CASE("tensor of basis states is the pair label") {
    const StandardModes m = standard_modes();
    const auto x = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]));
    const auto y = PureState::single(m.registry, label(Polarization::V, 2, m.src_b[0]));
    const auto pair = tensor(x, y);
    REQUIRE(pair.support_size() == 1);
    CHECK(pair.amplitude({label(Polarization::H, 1, m.src_a[0]),
                          label(Polarization::V, 2, m.src_b[0])}) == Cx{1.0});
}

TEST_CASE("tensor distributes over superpositions") {
    const StandardModes m = standard_modes();
    const double h = 1.0 / std::numbers::sqrt2;
    auto x = superpose(PureState::single(m.registry, label(Polarization::None, 1, m.src_a[0]), h),
                       PureState::single(m.registry, label(Polarization::None, 1, m.src_a[1]), h));
    auto y = PureState::single(m.registry, label(Polarization::None, 2, m.src_b[0]));
    const auto pair = tensor(x, y);
    REQUIRE(pair.support_size() == 2);
    for (const auto& [key, amp] : pair.terms()) CHECK(std::abs(amp - h) < 1e-15);
}

TEST_CASE("tensor of two normalized 4-term states has 16 terms and norm 1") {
    const StandardModes m = standard_modes();
    RngStream rng(3, 0);
    const auto pa = pool_a(m);
    const auto pb = pool_b(m);
    const auto x = testutil::random_single(m.registry, std::span(pa).subspan(0, 4), rng);
    const auto y = testutil::random_single(m.registry, std::span(pb).subspan(0, 4), rng);
    const auto pair = tensor(x, y);
    CHECK(pair.support_size() == 16);
    CHECK(pair.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Direct-expansion oracle: amplitudes must multiply term by term.
    for (const auto& [ka, va] : x.terms())
        for (const auto& [kb, vb] : y.terms())
            CHECK(std::abs(pair.amplitude({ka.a, kb.a}) - va * vb) < 1e-15);
}

TEST_CASE("tensor rejects arity mismatches and registry mismatches") {
    const StandardModes m = standard_modes();
    const StandardModes other = standard_modes();
    const auto x = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]));
    const auto y = PureState::single(m.registry, label(Polarization::V, 2, m.src_b[0]));
    const auto pair = tensor(x, y);
    CHECK_THROWS_AS(tensor(pair, y), std::invalid_argument);
    const auto foreign = PureState::single(other.registry, label(Polarization::V, 2, other.src_b[0]));
    CHECK_THROWS_AS(tensor(x, foreign), std::invalid_argument);
    CHECK_THROWS_AS(inner_product(x, foreign), std::invalid_argument);
}

TEST_CASE("inner product is conjugate-linear in the first argument") {
    const StandardModes m = standard_modes();
    RngStream rng(4, 0);
    const auto pa = pool_a(m);
    const auto x = testutil::random_single(m.registry, pa, rng);
    const auto y = testutil::random_single(m.registry, pa, rng);
    const Cx scale{0.3, -0.8};
    const Cx lhs = inner_product(normalize(x.scaled(scale)).first, y);
    const Cx direct = inner_product(x, y);
    const Cx expected = std::conj(scale / std::abs(scale)) * direct;
    CHECK(std::abs(lhs - expected) < 1e-12);
    CHECK(inner_product(x, x).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner_product(x, x).imag()) < 1e-14);
}

TEST_CASE("analyzer basis states with shared support are orthogonal") {
    // Hand-expansion oracle: fixed sign rows summed term by term.
    const StandardModes m = standard_modes();
    const auto x = basis_state(m, Photon::A, 1, 1);
    const auto y = basis_state(m, Photon::A, 1, 2);
    CHECK(std::abs(inner_product(x, y)) < 1e-15);
    // Disjoint supports: different group pairs lines with different rails.
    const auto z = basis_state(m, Photon::A, 2, 1);
    CHECK(std::abs(inner_product(x, z)) == 0.0);
}

TEST_CASE("fidelity basics") {
    const StandardModes m = standard_modes();
    const auto x = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]));
    const auto y = PureState::single(m.registry, label(Polarization::V, 1, m.src_a[0]));
    CHECK(fidelity(x, x) == doctest::Approx(1.0));
    CHECK(fidelity(x, y) == doctest::Approx(0.0));
    const double h = 1.0 / std::numbers::sqrt2;
    const auto mix = superpose(x.scaled(h), y.scaled(h));
    CHECK(fidelity(mix, x) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(fidelity(x.scaled(2.0), y), std::invalid_argument);
}

TEST_CASE("apply_mode_unitary: identity, involution and permutation") {
    const StandardModes m = standard_modes();
    RngStream rng(5, 0);
    const auto pa = pool_a(m);
    const auto x = testutil::random_single(m.registry, pa, rng);

    const std::array<int, 2> rails{m.a[0].v, m.a[1].v};
    const auto same = apply_mode_unitary(x, Photon::A, Dof::SpatialMode, CMatrix::identity(2), rails);
    CHECK(std::equal(same.terms().begin(), same.terms().end(), x.terms().begin(),
                     x.terms().end()));

    // Matrix-square oracle: the fixed splitter matrix squares to identity,
    // so applying it twice must reproduce the state.
    const CMatrix h = beam_splitter_matrix();
    const CMatrix h2 = h * h;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            CHECK(std::abs(h2.at(r, c) - (r == c ? 1.0 : 0.0)) < 1e-15);
    const auto twice = apply_mode_unitary(
        apply_mode_unitary(x, Photon::A, Dof::SpatialMode, h, rails), Photon::A,
        Dof::SpatialMode, h, rails);
    CHECK(fidelity(twice, x) == doctest::Approx(1.0).epsilon(1e-12));

    CMatrix swap(2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;
    const auto swapped = apply_mode_unitary(x, Photon::A, Dof::SpatialMode, swap, rails);
    for (const auto& [key, amp] : x.terms()) {
        BasisKey moved = key;
        if (moved.a.mode == m.a[0]) moved.a.mode = m.a[1];
        else if (moved.a.mode == m.a[1]) moved.a.mode = m.a[0];
        CHECK(std::abs(swapped.amplitude(moved) - amp) < 1e-15);
    }

    CMatrix skew(2);
    skew.at(0, 0) = 1.0;
    skew.at(0, 1) = 0.5;
    skew.at(1, 1) = 1.0;
    CHECK_THROWS_AS(apply_mode_unitary(x, Photon::A, Dof::SpatialMode, skew, rails),
                    std::invalid_argument);

    const std::array<int, 2> stray{m.a[0].v, 60002};
    CHECK_THROWS_AS(apply_mode_unitary(x, Photon::A, Dof::SpatialMode, h, stray),
                    std::invalid_argument);
    const std::array<int, 2> repeated{m.a[0].v, m.a[0].v};
    CHECK_THROWS_AS(apply_mode_unitary(x, Photon::A, Dof::SpatialMode, h, repeated),
                    std::invalid_argument);
}

TEST_CASE("unitaries act on polarization and frequency values too") {
    const StandardModes m = standard_modes();
    CMatrix swap(2);
    swap.at(0, 1) = 1.0;
    swap.at(1, 0) = 1.0;

    const auto h = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]));
    const std::array<int, 2> pols{0, 1};
    const auto flipped = apply_mode_unitary(h, Photon::A, Dof::Polarization, swap, pols);
    CHECK(flipped.amplitude({label(Polarization::V, 1, m.src_a[0]), PhotonLabel::none()}) ==
          Cx{1.0});

    const std::array<int, 2> lines{1, 2};
    const auto retuned = apply_mode_unitary(h, Photon::A, Dof::Frequency, swap, lines);
    CHECK(retuned.amplitude({label(Polarization::H, 2, m.src_a[0]), PhotonLabel::none()}) ==
          Cx{1.0});

    // Values not listed pass through.
    const auto line4 = PureState::single(m.registry, label(Polarization::H, 4, m.src_a[0]));
    const auto untouched = apply_mode_unitary(line4, Photon::A, Dof::Frequency, swap, lines);
    CHECK(std::equal(untouched.terms().begin(), untouched.terms().end(), line4.terms().begin(),
                     line4.terms().end()));
}

TEST_CASE("random unitaries preserve inner products") {
    const StandardModes m = standard_modes();
    RngStream rng(6, 0);
    const auto pa = pool_a(m);
    std::array<int, 4> rails{};
    for (int i = 0; i < 4; ++i) rails[i] = m.a[i].v;
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testutil::random_single(m.registry, pa, rng);
        const auto y = testutil::random_single(m.registry, pa, rng);
        const CMatrix u = testutil::random_unitary(4, rng);
        const Cx before = inner_product(x, y);
        const Cx after = inner_product(apply_mode_unitary(x, Photon::A, Dof::SpatialMode, u, rails),
                                       apply_mode_unitary(y, Photon::A, Dof::SpatialMode, u, rails));
        CHECK(std::abs(before - after) < 1e-12);
    }
}

TEST_CASE("marginals of the hyperentangled target state") {
    const StandardModes m = standard_modes();
    const PureState target = hyper_target_state(m);

    // Oracle: sum of squared magnitudes accumulated directly from the terms.
    std::map<int, double> pol_oracle, mode_oracle;
    for (const auto& [key, amp] : target.terms()) {
        pol_oracle[static_cast<int>(key.a.pol)] += std::norm(amp);
        mode_oracle[key.a.mode.v] += std::norm(amp);
    }

    const auto pol = marginal_distribution(target, Photon::A, Dof::Polarization);
    CHECK(pol.at(static_cast<int>(Polarization::H)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pol.at(static_cast<int>(Polarization::V)) == doctest::Approx(0.5).epsilon(1e-12));
    for (const auto& [v, p] : pol) CHECK(p == doctest::Approx(pol_oracle.at(v)).epsilon(1e-12));

    const auto spatial = marginal_distribution(target, Photon::A, Dof::SpatialMode);
    REQUIRE(spatial.size() == 4);
    for (const auto& [v, p] : spatial) {
        CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(p == doctest::Approx(mode_oracle.at(v)).epsilon(1e-12));
    }

    const auto point = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]));
    const auto dist = marginal_distribution(point, Photon::A, Dof::Frequency);
    REQUIRE(dist.size() == 1);
    CHECK(dist.at(1) == doctest::Approx(1.0));
}

TEST_CASE("marginal probabilities always sum to 1") {
    const StandardModes m = standard_modes();
    RngStream rng(7, 0);
    const auto pa = pool_a(m);
    const auto pb = pool_b(m);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = testutil::random_pair(m.registry, std::span(pa).subspan(0, 6),
                                             std::span(pb).subspan(0, 6), rng);
        for (Photon photon : {Photon::A, Photon::B})
            for (Dof dof : {Dof::Frequency, Dof::SpatialMode}) {
                double total = 0.0;
                for (const auto& [v, p] : marginal_distribution(s, photon, dof)) total += p;
                CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            }
    }
}

TEST_CASE("normalize returns the prior norm") {
    const StandardModes m = standard_modes();
    const auto x = PureState::single(m.registry, label(Polarization::H, 1, m.src_a[0]), 2.0);
    auto [unit, prior] = normalize(x);
    CHECK(prior == doctest::Approx(2.0));
    CHECK(unit.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Term-count oracle: 16 unit-coefficient terms give norm 4.
    std::vector<PureState::Term> terms;
    const auto pa = pool_a(m);
    const auto pb = pool_b(m);
    for (int i = 0; i < 16; ++i) terms.push_back({BasisKey{pa[i], pb[i]}, 1.0});
    auto [unit2, prior2] = normalize(PureState::from_terms(m.registry, 2, std::move(terms)));
    CHECK(prior2 == doctest::Approx(4.0).epsilon(1e-12));

    auto [unit3, prior3] = normalize(unit2);
    CHECK(prior3 == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(normalize(PureState::zero(m.registry, 1)), std::domain_error);
}

TEST_CASE("tensor then marginal recovers the factor distributions") {
    const StandardModes m = standard_modes();
    RngStream rng(8, 0);
    const auto pa = pool_a(m);
    const auto pb = pool_b(m);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = testutil::random_single(m.registry, std::span(pa).subspan(0, 8), rng);
        const auto y = testutil::random_single(m.registry, std::span(pb).subspan(0, 8), rng);
        const auto pair = tensor(x, y);
        for (Dof dof : {Dof::Frequency, Dof::SpatialMode}) {
            const auto lhs = marginal_distribution(pair, Photon::A, dof);
            const auto rhs = marginal_distribution(x, Photon::A, dof);
            REQUIRE(lhs.size() == rhs.size());
            for (const auto& [v, p] : rhs) CHECK(lhs.at(v) == doctest::Approx(p).epsilon(1e-12));
            const auto lhs_b = marginal_distribution(pair, Photon::B, dof);
            const auto rhs_b = marginal_distribution(y, Photon::A, dof);
            for (const auto& [v, p] : rhs_b)
                CHECK(lhs_b.at(v) == doctest::Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("sparse representation is canonical") {
    const StandardModes m = standard_modes();
    RngStream rng(9, 0);
    const auto pa = pool_a(m);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = testutil::random_single(m.registry, pa, rng);

        // Rebuilding from shuffled terms yields the identical term array.
        std::vector<PureState::Term> shuffled(x.terms().begin(), x.terms().end());
        for (size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.uniform_int(0, static_cast<int>(i) - 1)]);
        const auto rebuilt = PureState::from_terms(m.registry, 1, std::move(shuffled));
        CHECK(std::equal(rebuilt.terms().begin(), rebuilt.terms().end(), x.terms().begin(),
                         x.terms().end()));
        CHECK(fidelity(rebuilt, x) == doctest::Approx(1.0).epsilon(1e-12));

        // Distinct draws disagree as maps and have fidelity below 1.
        const auto y = testutil::random_single(m.registry, pa, rng);
        CHECK(fidelity(x, y) < 1.0 - 1e-6);
        CHECK(!std::equal(x.terms().begin(), x.terms().end(), y.terms().begin(), y.terms().end()));
    }
}

TEST_CASE("amplitudes below the floor are dropped") {
    const StandardModes m = standard_modes();
    std::vector<PureState::Term> terms{
        {BasisKey{label(Polarization::H, 1, m.src_a[0]), PhotonLabel::none()}, 1.0},
        {BasisKey{label(Polarization::V, 1, m.src_a[0]), PhotonLabel::none()}, 1e-15}};
    const auto s = PureState::from_terms(m.registry, 1, std::move(terms));
    CHECK(s.support_size() == 1);
}

TEST_CASE("states reject unregistered modes and bad frequencies") {
    const StandardModes m = standard_modes();
    CHECK_THROWS_AS(PureState::single(m.registry, label(Polarization::H, 1, ModeId{60000})),
                    std::invalid_argument);
    CHECK_THROWS_AS(PureState::single(m.registry, label(Polarization::H, 5, m.src_a[0])),
                    std::invalid_argument);
}

TEST_CASE("project_photon extracts the conditional remainder") {
    const StandardModes m = standard_modes();
    const PureState resource = freq_spatial_pair_state(m);
    const PureState probe = basis_state(m, Photon::A, 1, 1);
    auto [conditional, weight] = normalize(project_photon(resource, Photon::A, probe));
    // The resource pairs every analyzer state with its partner of the same
    // indices; the remainder must be that partner exactly.
    CHECK(fidelity(conditional, basis_state(m, Photon::B, 1, 1)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(weight == doctest::Approx(0.25).epsilon(1e-12));  // amplitude 1/4 per pair
}
