#pragma once

#include <cstdint>

namespace qmcqoi {

// splitmix64 finalizer; used wherever a counter-based random stream is needed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform double strictly inside (0,1).
inline double to_unit_open(std::uint64_t h) {
    return (double(h >> 11) + 0.5) * 0x1p-53;
}

} // namespace qmcqoi
