#pragma once

#include <cstdint>
#include <random>

namespace oup {

/// Generator for one stream; replicate r of seed s gets its own stream.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t replicate = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace oup
