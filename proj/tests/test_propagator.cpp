#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fidsim/hamiltonian.hpp"
#include "fidsim/noise.hpp"
#include "fidsim/propagator.hpp"
#include "fidsim/rng.hpp"

using namespace fidsim;
using std::complex;

namespace {

StateVector random_state(int n, uint64_t tag) {
    StateVector psi(size_t(1) << n);
    double norm = 0.0;
    for (size_t b = 0; b < psi.size(); ++b) {
        psi[b] = {counter_gaussian(300, tag, b, 0),
                  counter_gaussian(300, tag, b, 1)};
        norm += std::norm(psi[b]);
    }
    norm = std::sqrt(norm);
    for (auto& a : psi) a /= norm;
    return psi;
}

SegmentHamiltonian random_h(const LatticeGeometry& geom, uint64_t tag,
                            double delta = 0.4, double bigJ = 0.3) {
    SegmentHamiltonian h;
    h.geom = &geom;
    h.delta0 = 1.0;
    h.d.resize(geom.n);
    h.c.resize(geom.links.size());
    for (int j = 0; j < geom.n; ++j)
        h.d[j] = delta * counter_symmetric(400, tag, 0, j);
    for (size_t l = 0; l < geom.links.size(); ++l)
        h.c[l] = 2.0 * bigJ * counter_symmetric(400, tag, 0, geom.n + l);
    return h;
}

Eigen::MatrixXcd dense_propagator(const SegmentHamiltonian& h, double dt) {
    Eigen::MatrixXcd m = dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (int i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(complex<double>(0, -es.eigenvalues()(i) * dt));
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

Eigen::VectorXcd to_eigen(const StateVector& v) {
    Eigen::VectorXcd out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out(i) = v[i];
    return out;
}

double fidelity(const StateVector& a, const StateVector& b) {
    complex<double> o{0, 0};
    for (size_t i = 0; i < a.size(); ++i) o += std::conj(a[i]) * b[i];
    return std::norm(o);
}

} // namespace

TEST_CASE("zero time is the identity") {
    auto g = build_lattice(2, 2);
    auto h = random_h(g, 1);
    auto psi = random_state(4, 1);
    PropagatorMethod m;
    auto out = evolve_segment(h, 0.0, psi, m);
    for (size_t b = 0; b < psi.size(); ++b)
        CHECK(std::abs(out[b] - psi[b]) <= 1e-15);
}

TEST_CASE("uncoupled evolution keeps a basis state put") {
    auto g = build_lattice(2, 3);
    SegmentHamiltonian h = random_h(g, 2, 0.3, 0.0); // bigJ = 0
    for (size_t l = 0; l < h.c.size(); ++l) h.c[l] = 0.0;
    StateVector psi(64, {0, 0});
    psi[basis_index("101011")] = {1, 0};
    PropagatorMethod m;
    auto out = evolve_segment(h, 3.7, psi, m);
    CHECK(fidelity(psi, out) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("krylov propagation matches the dense exponential") {
    for (auto [r, c] : {std::pair{1, 4}, {2, 2}, {2, 3}, {1, 6}}) {
        auto g = build_lattice(r, c);
        for (uint64_t k = 0; k < 5; ++k) {
            auto h = random_h(g, 10 * g.n + k);
            auto psi = random_state(g.n, 10 * g.n + k);
            double dt = 0.25 + 0.35 * double(k);

            PropagatorMethod m;
            auto fast = evolve_segment(h, dt, psi, m);
            Eigen::VectorXcd slow = dense_propagator(h, dt) * to_eigen(psi);
            CHECK((to_eigen(fast) - slow).norm() <= 1e-9);

            PropagatorMethod md;
            md.kind = PropagatorKind::dense_exponential;
            auto dense = evolve_segment(h, dt, psi, md);
            CHECK((to_eigen(dense) - slow).norm() <= 1e-10);
        }
    }
}

TEST_CASE("two segments compose as an ordered product") {
    auto g = build_lattice(2, 2);
    auto h1 = random_h(g, 21);
    auto h2 = random_h(g, 22);
    auto psi = random_state(4, 21);
    PropagatorMethod m;

    auto step = evolve_segment(h2, 0.9, evolve_segment(h1, 1.3, psi, m), m);
    Eigen::VectorXcd dense = dense_propagator(h2, 0.9) *
                             (dense_propagator(h1, 1.3) * to_eigen(psi));
    CHECK((to_eigen(step) - dense).norm() <= 1e-9);
}

TEST_CASE("time ordering matters for non-commuting segments") {
    auto g = build_lattice(2, 2);
    auto h1 = random_h(g, 31, 0.5, 0.4);
    auto h2 = random_h(g, 32, 0.5, 0.4);
    auto psi = random_state(4, 31);
    PropagatorMethod m;

    auto ab = evolve_segment(h2, 1.1, evolve_segment(h1, 0.7, psi, m), m);
    auto ba = evolve_segment(h1, 0.7, evolve_segment(h2, 1.1, psi, m), m);
    CHECK(fidelity(ab, ba) < 1.0 - 1e-6);
}

TEST_CASE("piecewise evolution stays unitary over many segments") {
    auto g = build_lattice(2, 5);
    ModelParams p;
    p.delta = 0.3;
    p.bigJ = 5e-3;
    auto sched = sample_schedule(g, p, 0.5, 25.0, 17, 0);
    REQUIRE(sched.segments.size() == 50);

    StateVector psi(1024, {0, 0});
    psi[basis_index("1010110100")] = {1, 0};
    PropagatorMethod m;
    auto res = evolve_piecewise(g, 1.0, sched, psi, {}, m);

    CHECK(res.stats.max_norm_defect < 1e-9);
    CHECK(res.stats.segments == 50);
    double norm = 0.0;
    for (auto& a : res.psi_final) norm += std::norm(a);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fidelity samples start at one and split segments exactly") {
    auto g = build_lattice(2, 3);
    ModelParams p;
    p.delta = 0.3;
    p.bigJ = 0.01;
    auto sched = sample_schedule(g, p, 2.0, 10.0, 23, 1);

    StateVector psi(64, {0, 0});
    psi[basis_index("101010")] = {1, 0};
    PropagatorMethod m;

    // sample times inside segments must not perturb the final state
    auto plain = evolve_piecewise(g, 1.0, sched, psi, {}, m);
    auto split = evolve_piecewise(g, 1.0, sched, psi,
                                  {0.0, 1.3, 3.7, 5.0, 9.9}, m);
    CHECK(fidelity(plain.psi_final, split.psi_final) ==
          doctest::Approx(1.0).epsilon(1e-12));
    Eigen::VectorXcd diff =
        to_eigen(plain.psi_final) - to_eigen(split.psi_final);
    CHECK(diff.norm() <= 1e-9);

    REQUIRE(split.fidelity_samples.size() == 5);
    CHECK(split.fidelity_samples[0].first == 0.0);
    CHECK(split.fidelity_samples[0].second == doctest::Approx(1.0));
    for (auto& [t, f] : split.fidelity_samples) {
        CHECK(f >= 0.0);
        CHECK(f <= 1.0 + 1e-12);
    }
}

TEST_CASE("static schedule evolution equals one segment step") {
    auto g = build_lattice(2, 3);
    ModelParams p;
    p.delta = 0.3;
    p.bigJ = 0.01;
    auto sched = static_schedule(g, p, 4.0, 29, 0);
    REQUIRE(sched.segments.size() == 1);

    StateVector psi = random_state(6, 91);
    PropagatorMethod m;
    auto via_piecewise = evolve_piecewise(g, 1.0, sched, psi, {}, m);

    auto h = segment_hamiltonian(g, 1.0, sched.segments[0]);
    auto direct = evolve_segment(h, 4.0, psi, m);
    CHECK((to_eigen(via_piecewise.psi_final) - to_eigen(direct)).norm() <=
          1e-9);
}
