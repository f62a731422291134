// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "passkit/common.hpp"

namespace passkit {

// All randomness in the toolkit flows from one 64-bit master seed through a
// counter-based splitter, so batch-parallel runs reproduce serial runs: each
// logical stream (trial index, sweep point, protocol, ...) derives its own
// generator from (seed, stream) and never shares state.

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derive an independent substream seed from a master seed and stream index.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

inline std::mt19937_64 engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(derive(seed, stream));
}

inline cplx std_complex_gaussian(std::mt19937_64 &gen) {
    std::normal_distribution<double> n(0.0, 1.0 / std::sqrt(2.0));
    return {n(gen), n(gen)};
}

} // namespace rng
} // namespace passkit
