#pragma once

#include <cstdint>
#include <random>

namespace vortex {

using Rng = std::mt19937_64;

// Independent stream for ensemble worker/member `index` under one master
// seed. Streams are fixed by (master, index) alone.
inline Rng stream_rng(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace vortex
