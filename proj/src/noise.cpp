#include "fidsim/noise.hpp"

#include <cmath>

#include "fidsim/errors.hpp"
#include "fidsim/rng.hpp"

namespace fidsim {

namespace {

// Number of switching periods covering the horizon. Guards against
// floating-point ceil(t/tau) giving N+1 when t/tau is integral.
int segment_count(double horizon, double tau) {
    if (horizon <= 0.0) return 0;
    double ratio = horizon / tau;
    double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest))
        return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(ratio));
}

} // namespace

NoiseSchedule sample_schedule(const LatticeGeometry& geom,
                              const ModelParams& params, double tau,
                              double horizon, uint64_t seed,
                              uint64_t realization_index) {
    if (tau <= 0.0) throw InputError("switching period tau must be positive");
    if (horizon < 0.0) throw InputError("horizon must be non-negative");

    NoiseSchedule sched;
    sched.tau = tau;
    sched.horizon = horizon;
    sched.seed = seed;
    sched.realization_index = realization_index;

    int nseg = segment_count(horizon, tau);
    sched.segments.reserve(nseg);
    double remaining = horizon;
    for (int s = 0; s < nseg; ++s) {
        Segment seg;
        seg.duration = (s + 1 < nseg) ? tau : remaining; // last absorbs rounding
        seg.d.resize(geom.n);
        for (int j = 0; j < geom.n; ++j)
            seg.d[j] = params.delta *
                       counter_symmetric(seed, realization_index, s, j);
        seg.c.resize(geom.links.size());
        for (size_t l = 0; l < geom.links.size(); ++l)
            seg.c[l] = 2.0 * params.bigJ *
                       counter_symmetric(seed, realization_index, s, geom.n + l);
        remaining -= seg.duration;
        sched.segments.push_back(std::move(seg));
    }
    return sched;
}

NoiseSchedule static_schedule(const LatticeGeometry& geom,
                              const ModelParams& params, double horizon,
                              uint64_t seed, uint64_t realization_index) {
    double tau = horizon > 0.0 ? horizon : 1.0;
    return sample_schedule(geom, params, tau, horizon, seed, realization_index);
}

} // namespace fidsim
