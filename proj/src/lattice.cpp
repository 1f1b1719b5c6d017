#include "fidsim/lattice.hpp"

#include <sstream>

#include "fidsim/errors.hpp"

namespace fidsim {

std::string check_weak_imperfections(const ModelParams& p, double warn_fraction) {
    std::ostringstream os;
    if (p.delta > warn_fraction * p.delta0)
        os << "warning: delta=" << p.delta << " is not small against delta0="
           << p.delta0 << "\n";
    if (p.bigJ > warn_fraction * p.delta0)
        os << "warning: J=" << p.bigJ << " is not small against delta0="
           << p.delta0 << "\n";
    return os.str();
}

LatticeGeometry build_lattice(int rows, int cols) {
    if (rows < 1 || cols < 1)
        throw ConfigError("lattice dimensions must be positive");
    long long n = static_cast<long long>(rows) * cols;
    if (n > kMaxQubits)
        throw ConfigError("lattice of " + std::to_string(n) +
                          " qubits exceeds the cap of " +
                          std::to_string(kMaxQubits));
    LatticeGeometry g;
    g.rows = rows;
    g.cols = cols;
    g.n = static_cast<int>(n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int site = r * cols + c;
            if (c + 1 < cols) g.links.emplace_back(site, site + 1);
            if (r + 1 < rows) g.links.emplace_back(site, site + cols);
        }
    }
    return g;
}

std::pair<int, int> link_census(const LatticeGeometry& geom,
                                const std::string& bits) {
    if (static_cast<int>(bits.size()) != geom.n)
        throw InputError("bitstring length " + std::to_string(bits.size()) +
                         " does not match qubit count " + std::to_string(geom.n));
    for (char b : bits)
        if (b != '0' && b != '1')
            throw InputError("bitstring must contain only 0 and 1");
    int anti = 0, par = 0;
    for (auto [i, j] : geom.links)
        (bits[i] == bits[j] ? par : anti)++;
    return {anti, par};
}

ProductState make_product_state(const LatticeGeometry& geom,
                                const std::string& bits) {
    auto [anti, par] = link_census(geom, bits);
    ProductState s;
    s.bits = bits;
    s.n_antiparallel = anti;
    s.n_parallel = par;
    s.n_up = 0;
    for (char b : bits)
        if (b == '1') s.n_up++;
    return s;
}

uint64_t basis_index(const std::string& bits) {
    uint64_t idx = 0;
    for (size_t j = 0; j < bits.size(); ++j)
        if (bits[j] == '1') idx |= (1ULL << j);
    return idx;
}

StateVector initial_state_vector(const LatticeGeometry& geom,
                                 const ProductState& state) {
    if (static_cast<int>(state.bits.size()) != geom.n)
        throw InputError("product state does not match geometry");
    StateVector psi(size_t{1} << geom.n, {0.0, 0.0});
    psi[basis_index(state.bits)] = {1.0, 0.0};
    return psi;
}

} // namespace fidsim
