// SPDX-License-Identifier: Apache-2.0
#ifndef ECUSIM_RNG_HPP
#define ECUSIM_RNG_HPP

#include <cstdint>

namespace ecusim {

// SplitMix64. Used instead of <random> engines+distributions because the
// standard distributions are implementation-defined and the event log must
// be byte-identical across platforms for the same seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Derive an independent stream, e.g. one per measurement.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 g(seed ^ (0x5851f42d4c957f2dull * (stream + 1)));
        return g.next();
    }

private:
    std::uint64_t state_;
};

} // namespace ecusim

#endif
