#include "hkts/rng.hpp"

#include <limits>
#include <stdexcept>

namespace hkts {

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
    const std::uint64_t range = span + 1;
    // Reject the incomplete top block so every value is equally likely.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t w;
    do {
        w = engine_();
    } while (w >= limit);
    return lo + w % range;
}

NoiseVector draw_noise(Rng& rng, std::size_t n, double delta) {
    NoiseVector noise{std::vector<double>(n)};
    for (double& v : noise.xi) v = delta * (2.0 * rng.uniform01() - 1.0);
    return noise;
}

}  // namespace hkts
