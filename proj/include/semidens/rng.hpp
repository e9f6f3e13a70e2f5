#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace semidens {

// Deterministic random stream. Draws are fully specified by (seed, stream):
// xoshiro-style splitmix64 expands the pair into mt19937_64 seed material,
// uniforms come from the top 53 bits, normals from Box-Muller (two uniforms
// per draw, no caching). Identical output on every platform and regardless
// of how work is partitioned across workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        state_ = splitmix64(s);
        for (int i = 0; i < 4; ++i) state_ = splitmix64(state_);
    }

    std::uint64_t next_u64() {
        state_ = splitmix64(state_);
        return state_;
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace semidens
