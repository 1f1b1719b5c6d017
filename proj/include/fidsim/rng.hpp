#pragma once

#include <cmath>
#include <cstdint>

namespace fidsim {

// Counter-based random values: every draw is a pure function of
// (seed, realization, segment, field), so schedules are reproducible
// independent of execution order and worker count.

inline uint64_t mix64(uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t counter_u64(uint64_t seed, uint64_t realization,
                            uint64_t segment, uint64_t field) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ realization);
    h = mix64(h ^ segment);
    h = mix64(h ^ field);
    return h;
}

// top 53 bits -> [0, 1)
inline double to_unit(uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double counter_unit(uint64_t seed, uint64_t realization,
                           uint64_t segment, uint64_t field) {
    return to_unit(counter_u64(seed, realization, segment, field));
}

// uniform on [-1/2, 1/2)
inline double counter_symmetric(uint64_t seed, uint64_t realization,
                                uint64_t segment, uint64_t field) {
    return counter_unit(seed, realization, segment, field) - 0.5;
}

// standard normal via Box-Muller; consumes fields (field) and (field | kGaussTag)
inline constexpr uint64_t kGaussTag = 1ULL << 62;

inline double counter_gaussian(uint64_t seed, uint64_t realization,
                               uint64_t segment, uint64_t field) {
    double u1 = counter_unit(seed, realization, segment, field);
    double u2 = counter_unit(seed, realization, segment, field | kGaussTag);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace fidsim
