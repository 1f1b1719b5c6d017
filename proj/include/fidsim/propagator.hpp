#pragma once

#include <cstdint>
#include <vector>

#include "fidsim/hamiltonian.hpp"
#include "fidsim/lattice.hpp"
#include "fidsim/noise.hpp"

namespace fidsim {

enum class PropagatorKind { krylov, dense_exponential };

struct PropagatorMethod {
    PropagatorKind kind = PropagatorKind::krylov;
    int krylov_dim = 30;     // max Lanczos vectors per substep
    double substep = 0.5;    // max time per Krylov application, units 1/delta0
    double tolerance = 1e-10; // per-substep residual bound
};

struct PropagationStats {
    double max_norm_defect = 0.0; // worst |norm - 1| seen before renormalizing
    long matvecs = 0;
    long segments = 0;
};

struct EvolutionResult {
    StateVector psi_final;
    std::vector<std::pair<double, double>> fidelity_samples; // (t, F)
    PropagationStats stats;
};

// psi -> exp(-i h dt) psi, up to method tolerance; norm defect is logged
// into stats (if given) and the state renormalized.
StateVector evolve_segment(const SegmentHamiltonian& h, double dt,
                           const StateVector& psi, const PropagatorMethod& method,
                           PropagationStats* stats = nullptr);

// Chronological product over schedule segments (earliest acts first),
// sampling fidelity against psi0 at the requested times; a sample time
// inside a segment splits it exactly.
EvolutionResult evolve_piecewise(const LatticeGeometry& geom, double delta0,
                                 const NoiseSchedule& schedule,
                                 const StateVector& psi0,
                                 const std::vector<double>& sample_times,
                                 const PropagatorMethod& method);

} // namespace fidsim
