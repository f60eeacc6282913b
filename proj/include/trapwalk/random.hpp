#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace trapwalk {

using Rng = std::mt19937_64;

// Stream tags for derive_seed. Distinct tags give unrelated streams.
enum class StreamTag : std::uint64_t {
    walk = 1,
    environment = 2,
    spine = 3,
    leaf = 4,
    extremal = 5,
    array = 6,
    oracle = 7,
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t tag);
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag)
{
    return derive_seed(master, index, static_cast<std::uint64_t>(tag));
}

// 53-bit uniform on [0,1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform on the open interval (0,1); never returns 0 or 1.
inline double uniform_open(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

// Same mapping applied to a hash value, for keyed lookups.
inline double bits_to_open01(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

inline double exponential1(Rng& rng) { return -std::log(uniform_open(rng)); }

}  // namespace trapwalk
