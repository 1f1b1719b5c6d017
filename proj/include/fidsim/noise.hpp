#pragma once

#include <cstdint>
#include <vector>

#include "fidsim/lattice.hpp"

namespace fidsim {

struct Segment {
    double duration = 0.0;
    std::vector<double> d; // per-qubit on-site offsets, in [-delta/2, delta/2]
    std::vector<double> c; // per-link couplings, in [-bigJ, bigJ]
};

struct NoiseSchedule {
    double tau = 0.0;
    double horizon = 0.0;
    uint64_t seed = 0;
    uint64_t realization_index = 0;
    std::vector<Segment> segments;
};

// Piecewise-constant fields redrawn every tau; the trailing partial
// segment (duration horizon - N*tau) gets a fresh draw like any other.
// Draw for qubit j in segment s: counter stream (seed, realization, s, j);
// link l uses field id n + l.
NoiseSchedule sample_schedule(const LatticeGeometry& geom,
                              const ModelParams& params, double tau,
                              double horizon, uint64_t seed,
                              uint64_t realization_index);

// single segment covering [0, horizon]
NoiseSchedule static_schedule(const LatticeGeometry& geom,
                              const ModelParams& params, double horizon,
                              uint64_t seed, uint64_t realization_index);

} // namespace fidsim
