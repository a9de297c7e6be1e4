// SPDX-License-Identifier: Apache-2.0
#ifndef RRS_RNG_HPP
#define RRS_RNG_HPP

#include <cstdint>

namespace rrs {
namespace rng {

// Counter-based stream: output i is a pure function of (seed, stream, i),
// so chunked Monte Carlo reproduces bit-identically under any degree of
// parallelism.  The mixer is the splitmix64 finalizer (Vigna), used in
// counter mode.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

struct CounterStream {
    std::uint64_t base = 0;
    std::uint64_t counter = 0;

    static CounterStream from(std::uint64_t seed, std::uint64_t stream) {
        CounterStream s;
        s.base = mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 1));
        return s;
    }

    std::uint64_t next_u64() { return mix64(base + (++counter) * kGolden); }

    /// Uniform on the open interval (0, 1); never returns an endpoint, so
    /// log transforms stay finite.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
};

}  // namespace rng
}  // namespace rrs

#endif  // RRS_RNG_HPP
