#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fidsim/lattice.hpp"
#include "fidsim/noise.hpp"

namespace fidsim {

struct SegmentHamiltonian {
    const LatticeGeometry* geom = nullptr;
    double delta0 = 1.0;
    std::vector<double> d; // on-site offsets, size n
    std::vector<double> c; // link couplings, size |links|
};

SegmentHamiltonian segment_hamiltonian(const LatticeGeometry& geom,
                                       double delta0, const Segment& seg);

// Precomputed form for the hot loop: full diagonal table plus XOR masks.
// diag[b] = sum_j (delta0 + d[j]) * s_j(b), s_j = +1 if bit j set else -1.
struct CompiledHamiltonian {
    int n = 0;
    std::vector<double> diag;        // 2^n entries
    std::vector<uint64_t> masks;     // per link: bit(i) | bit(j)
    std::vector<double> couplings;   // per link
    double norm_bound = 0.0;         // >= operator norm (diag max + |c| sum)
};

CompiledHamiltonian compile_hamiltonian(const SegmentHamiltonian& h);

// out = H * in; out must not alias in
void apply_compiled(const CompiledHamiltonian& h, const StateVector& in,
                    StateVector& out);

StateVector apply_h(const SegmentHamiltonian& h, const StateVector& psi);

// dense materialization, oracle use only (n <= 12)
Eigen::MatrixXcd dense_matrix(const SegmentHamiltonian& h);

// psi <- exp(-i H0 t) psi with H0 = sum_j delta0 sigma_z(j):
// phase exp(-i delta0 (2 popcount(b) - n) t) per basis index b
void h0_phase(const LatticeGeometry& geom, double delta0, double t,
              StateVector& psi);

} // namespace fidsim
