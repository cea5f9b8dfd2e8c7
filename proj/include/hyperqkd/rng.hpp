// Counter-based splittable random streams. Every draw is a mixed function of
// (key, counter), so independent substreams are just independent keys and a
// session can hand out per-round streams without sharing generator state.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace hyperqkd {

namespace detail {
inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class RngStream {
  public:
    RngStream() = default;
    RngStream(uint64_t seed, uint64_t stream)
        : key_(detail::mix64(detail::mix64(seed) ^ (stream * detail::kGolden + 1))) {}

    uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
        const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
        return lo + static_cast<int>(wide >> 64);
    }

    // Samples an index from unnormalized nonnegative weights.
    int sample(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("sample: negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("sample: zero total weight");
        const double x = uniform() * total;
        double cum = 0.0;
        int last_positive = -1;
        for (size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) last_positive = static_cast<int>(i);
            cum += weights[i];
            if (x < cum) return static_cast<int>(i);
        }
        return last_positive;
    }

  private:
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

}  // namespace hyperqkd
