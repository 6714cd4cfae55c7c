#pragma once

#include <cstdint>
#include <random>

#include "hkts/model.hpp"

namespace hkts {

/// Seeded random stream used by every simulation.
///
/// The engine is std::mt19937_64, whose output sequence the C++ standard fixes
/// for a given seed. Uniform variates are built from the top 53 bits of one
/// engine output, u = (w >> 11) * 2^-53, so u is in [0, 1) and identical on
/// every conforming platform. std::uniform_real_distribution is not used
/// because its algorithm is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on [lo, hi].
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 engine_;
};

/// n independent draws uniform on [-delta, delta], each delta * (2u - 1).
NoiseVector draw_noise(Rng& rng, std::size_t n, double delta);

}  // namespace hkts
