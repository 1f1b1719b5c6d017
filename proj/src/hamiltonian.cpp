#include "fidsim/hamiltonian.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include "fidsim/errors.hpp"

namespace fidsim {

SegmentHamiltonian segment_hamiltonian(const LatticeGeometry& geom,
                                       double delta0, const Segment& seg) {
    SegmentHamiltonian h;
    h.geom = &geom;
    h.delta0 = delta0;
    h.d = seg.d;
    h.c = seg.c;
    if (h.d.size() != static_cast<size_t>(geom.n) ||
        h.c.size() != geom.links.size())
        throw InputError("segment fields do not match geometry");
    return h;
}

CompiledHamiltonian compile_hamiltonian(const SegmentHamiltonian& h) {
    const auto& geom = *h.geom;
    if (h.d.size() != static_cast<size_t>(geom.n) ||
        h.c.size() != geom.links.size())
        throw InputError("segment fields do not match geometry");

    CompiledHamiltonian ch;
    ch.n = geom.n;
    size_t dim = size_t{1} << geom.n;

    // Incremental diagonal: flipping bit j from the predecessor adds
    // 2 (delta0 + d[j]).
    ch.diag.resize(dim);
    double base = 0.0;
    for (int j = 0; j < geom.n; ++j) base -= h.delta0 + h.d[j];
    ch.diag[0] = base;
    for (size_t b = 1; b < dim; ++b) {
        int j = std::countr_zero(b);
        ch.diag[b] = ch.diag[b ^ (size_t{1} << j)] + 2.0 * (h.delta0 + h.d[j]);
    }

    ch.masks.reserve(geom.links.size());
    ch.couplings.reserve(geom.links.size());
    double offdiag = 0.0;
    for (size_t l = 0; l < geom.links.size(); ++l) {
        auto [i, j] = geom.links[l];
        ch.masks.push_back((uint64_t{1} << i) | (uint64_t{1} << j));
        ch.couplings.push_back(h.c[l]);
        offdiag += std::abs(h.c[l]);
    }

    double dmax = 0.0;
    for (int j = 0; j < geom.n; ++j) dmax += std::abs(h.delta0 + h.d[j]);
    ch.norm_bound = dmax + offdiag;
    return ch;
}

void apply_compiled(const CompiledHamiltonian& h, const StateVector& in,
                    StateVector& out) {
    size_t dim = size_t{1} << h.n;
    if (in.size() != dim)
        throw InputError("state dimension does not match Hamiltonian");
    out.resize(dim);
    for (size_t b = 0; b < dim; ++b) out[b] = h.diag[b] * in[b];
    for (size_t l = 0; l < h.masks.size(); ++l) {
        uint64_t m = h.masks[l];
        double c = h.couplings[l];
        if (c == 0.0) continue;
        for (size_t b = 0; b < dim; ++b) out[b] += c * in[b ^ m];
    }
}

StateVector apply_h(const SegmentHamiltonian& h, const StateVector& psi) {
    auto ch = compile_hamiltonian(h);
    StateVector out;
    apply_compiled(ch, psi, out);
    return out;
}

Eigen::MatrixXcd dense_matrix(const SegmentHamiltonian& h) {
    const auto& geom = *h.geom;
    if (geom.n > 12)
        throw CapabilityError("dense matrix limited to n <= 12, got n = " +
                              std::to_string(geom.n));
    auto ch = compile_hamiltonian(h);
    size_t dim = size_t{1} << geom.n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (size_t b = 0; b < dim; ++b) m(b, b) = ch.diag[b];
    for (size_t l = 0; l < ch.masks.size(); ++l)
        for (size_t b = 0; b < dim; ++b)
            m(b ^ ch.masks[l], b) += ch.couplings[l];
    return m;
}

void h0_phase(const LatticeGeometry& geom, double delta0, double t,
              StateVector& psi) {
    size_t dim = size_t{1} << geom.n;
    if (psi.size() != dim)
        throw InputError("state dimension does not match geometry");
    // phases depend only on popcount; precompute the n+1 values
    std::vector<std::complex<double>> ph(geom.n + 1);
    for (int k = 0; k <= geom.n; ++k) {
        double e = delta0 * (2.0 * k - geom.n);
        ph[k] = std::polar(1.0, -e * t);
    }
    for (size_t b = 0; b < dim; ++b)
        psi[b] *= ph[std::popcount(b)];
}

} // namespace fidsim
