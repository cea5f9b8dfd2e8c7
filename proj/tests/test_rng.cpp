#include <algorithm>
#include <array>
#include <vector>

#include "doctest.h"
#include "hyperqkd/rng.hpp"

using namespace hyperqkd;

TEST_CASE("streams are deterministic and independent") {
    RngStream a(42, 0), a2(42, 0), b(42, 1), c(43, 0);
    std::vector<uint64_t> seq_a, seq_a2, seq_b, seq_c;
    for (int i = 0; i < 16; ++i) {
        seq_a.push_back(a.next_u64());
        seq_a2.push_back(a2.next_u64());
        seq_b.push_back(b.next_u64());
        seq_c.push_back(c.next_u64());
    }
    CHECK(seq_a == seq_a2);
    CHECK(seq_a != seq_b);
    CHECK(seq_a != seq_c);
}

TEST_CASE("uniform stays in [0,1) and covers the range") {
    RngStream rng(7, 3);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("uniform_int covers the inclusive range roughly evenly") {
    RngStream rng(1, 9);
    std::array<int, 16> counts{};
    for (int i = 0; i < 16000; ++i) {
        const int v = rng.uniform_int(1, 16);
        REQUIRE(v >= 1);
        REQUIRE(v <= 16);
        counts[v - 1] += 1;
    }
    for (int c : counts) CHECK(c > 700);  // expected 1000 per bin
}

TEST_CASE("sample follows the weights") {
    RngStream rng(5, 5);
    const std::array<double, 3> weights{0.0, 0.75, 0.25};
    std::array<int, 3> counts{};
    for (int i = 0; i < 8000; ++i) counts[rng.sample(weights)] += 1;
    CHECK(counts[0] == 0);
    CHECK(counts[1] > 5600);
    CHECK(counts[2] > 1600);

    CHECK_THROWS_AS(rng.sample(std::array<double, 2>{0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(rng.sample(std::array<double, 2>{-1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("point-mass weights always return the same index") {
    RngStream rng(2, 2);
    const std::array<double, 4> weights{0.0, 0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i) CHECK(rng.sample(weights) == 2);
}
