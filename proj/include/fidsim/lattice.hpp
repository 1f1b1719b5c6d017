#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fidsim {

inline constexpr int kMaxQubits = 24; // 2^24 amplitudes, memory guard

struct LatticeGeometry {
    int rows = 0;
    int cols = 0;
    int n = 0;
    // nearest-neighbor pairs (i, j) with i < j, free boundaries,
    // row-major sites, horizontal links before vertical at each site
    std::vector<std::pair<int, int>> links;
};

struct ModelParams {
    double delta0 = 1.0; // on-site splitting, the energy unit
    double delta = 0.0;  // on-site noise: d_j uniform on [-delta/2, delta/2]
    double bigJ = 0.0;   // coupling noise: c_ij uniform on [-bigJ, bigJ]
    double sigma2 = 1.0 / 12.0; // variance of the unit uniform
};

// Emits a warning line (returned as string, empty if fine) when the
// weak-imperfection assumption is strained.
std::string check_weak_imperfections(const ModelParams& p,
                                     double warn_fraction = 0.5);

struct ProductState {
    std::string bits; // bits[j] is qubit j, '1' = up
    int n_up = 0;
    int n_parallel = 0;     // links with equal endpoint spins
    int n_antiparallel = 0; // links with opposite endpoint spins
};

using StateVector = std::vector<std::complex<double>>;

LatticeGeometry build_lattice(int rows, int cols);

// (n_antiparallel, n_parallel)
std::pair<int, int> link_census(const LatticeGeometry& geom,
                                const std::string& bits);

ProductState make_product_state(const LatticeGeometry& geom,
                                const std::string& bits);

// basis index of a bitstring: qubit j = bit j of the index
uint64_t basis_index(const std::string& bits);

StateVector initial_state_vector(const LatticeGeometry& geom,
                                 const ProductState& state);

} // namespace fidsim
