#pragma once

#include <cmath>
#include <cstdint>

namespace rou {

// SplitMix64 finalizer (Steele, Lea & Flood). A bijection on 64-bit words
// with full avalanche; used for every seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of path `index` in a batch: mix64(mix64(master) + (index+1) * golden).
// Depends only on (master_seed, index), never on scheduling.
constexpr std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(mix64(master_seed) + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// xoshiro256** seeded by running SplitMix64 from a single 64-bit seed.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            word = mix64(x);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Standard normal variates by the Box-Muller transform, two per pair of
// uniforms. Deterministic across platforms with IEEE libm.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) noexcept : engine_(seed) {}

    double operator()() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double radius = std::sqrt(-2.0 * std::log(engine_.uniform()));
        const double angle = 6.283185307179586477 * engine_.uniform();
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double uniform() noexcept { return engine_.uniform(); }

private:
    Xoshiro256 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rou
