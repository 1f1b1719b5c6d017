#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "fidsim/errors.hpp"
#include "fidsim/noise.hpp"
#include "fidsim/propagator.hpp"
#include "fidsim/rng.hpp"
#include "fidsim/theorem.hpp"

using namespace fidsim;
using std::complex;

namespace {

Eigen::MatrixXcd clean_exponential(const Eigen::MatrixXd& h0, double t) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
    Eigen::VectorXcd phases(h0.rows());
    for (int i = 0; i < h0.rows(); ++i)
        phases(i) = std::exp(complex<double>(0, -es.eigenvalues()(i) * t));
    return es.eigenvectors().cast<complex<double>>() * phases.asDiagonal() *
           es.eigenvectors().transpose().cast<complex<double>>();
}

// dense flip-flop form: for every link, hop the antiparallel pair
Eigen::MatrixXcd flip_flop_dense(const LatticeGeometry& geom) {
    int dim = 1 << geom.n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (auto [i, j] : geom.links) {
        uint64_t mask = (1ULL << i) | (1ULL << j);
        for (int b = 0; b < dim; ++b) {
            bool bi = b >> i & 1, bj = b >> j & 1;
            if (bi != bj) m(b ^ mask, b) += 1.0;
        }
    }
    return m;
}

TheoremInstance diagonal_instance(double t = 2.0) {
    TheoremInstance inst;
    inst.h0 = Eigen::Vector3d(0.3, -1.1, 1.9).asDiagonal();
    inst.v = Eigen::Vector3d(1.5, -0.7, 0.4).asDiagonal();
    inst.t = t;
    inst.segment_counts = {4, 16, 64};
    return inst;
}

} // namespace

TEST_CASE("noise draws are reproducible and uniform on [-1/2,1/2)") {
    CHECK(theorem_noise(3, 5, 7) == theorem_noise(3, 5, 7));
    CHECK(theorem_noise(3, 5, 7) != theorem_noise(3, 5, 8));
    for (uint64_t k = 0; k < 1000; ++k) {
        double x = theorem_noise(1, 2, k);
        CHECK(x >= -0.5);
        CHECK(x < 0.5);
    }
}

TEST_CASE("zero perturbation leaves the clean evolution") {
    auto inst = diagonal_instance();
    inst.v = Eigen::MatrixXd::Zero(3, 3);
    auto u = product_unitary(inst, inst.t / 16, 5);
    auto u0 = clean_exponential(inst.h0, inst.t);
    CHECK((u - u0).norm() <= 1e-12);
}

TEST_CASE("products are unitary") {
    auto inst = random_instance(16, 2.0, {4, 64}, 9);
    for (int n : {1, 4, 64}) {
        auto u = product_unitary(inst, inst.t / n, 3, 1);
        Eigen::MatrixXcd defect =
            u.adjoint() * u - Eigen::MatrixXcd::Identity(16, 16);
        CHECK(defect.norm() <= 1e-10);
    }
}

TEST_CASE("commuting families have a closed-form deviation") {
    auto inst = diagonal_instance();
    uint64_t seed = 21, trial = 4;
    for (int n : {1, 8, 32}) {
        double tau = inst.t / n;
        auto u = product_unitary(inst, tau, seed, trial);

        double s = 0.0;
        for (int k = 0; k < n; ++k) s += theorem_noise(seed, trial, k);

        // U = exp(-i (H0 t + V tau * sum_k xi_k)) for diagonal H0, V
        Eigen::MatrixXd gen = inst.h0 * inst.t + inst.v * (tau * s);
        Eigen::MatrixXcd expect = clean_exponential(gen, 1.0);
        CHECK((u - expect).norm() <= 1e-10);
    }
}

TEST_CASE("deviation shrinks like the square root of the segment count") {
    auto inst = random_instance(12, 2.0, {4, 16, 64, 256}, 33);
    ThreadPool pool(2);
    auto report = convergence_scan(inst, 24, 0.05, 2, pool);

    REQUIRE(report.rows.size() == 4);
    CHECK(report.fitted_exponent < -0.1);
    CHECK(report.fitted_exponent > -0.9);
    for (const auto& row : report.rows) {
        CHECK(row.p_hat >= 0.0);
        CHECK(row.p_hat <= 1.0);
        CHECK(row.ci_lo <= row.p_hat + 1e-12);
        CHECK(row.ci_hi >= row.p_hat - 1e-12);
        CHECK(row.median_dev >= 0.0);
        CHECK(row.tau == doctest::Approx(inst.t / row.n_segments));
    }
    // medians themselves must decrease over a 64x span of N
    CHECK(report.rows.back().median_dev < report.rows.front().median_dev);
    CHECK(report.epsilon == 0.05);
    CHECK(report.trials == 24);
}

TEST_CASE("an impossible deviation threshold is never exceeded") {
    auto inst = random_instance(8, 2.0, {4, 16}, 7);
    ThreadPool pool(2);
    // dev = ||U_N - U_0|| <= 2 always
    auto report = convergence_scan(inst, 20, 2.5, 3, pool);
    for (const auto& row : report.rows) {
        CHECK(row.p_hat == 0.0);
        CHECK(row.ci_lo == 0.0);
    }
}

TEST_CASE("scan rejects undersized trial counts") {
    auto inst = random_instance(8, 2.0, {4}, 7);
    ThreadPool pool(1);
    CHECK_THROWS_AS(convergence_scan(inst, 10, 0.05, 1, pool), InputError);
}

TEST_CASE("gaussian surrogate converges in distribution") {
    auto inst = diagonal_instance();
    ThreadPool pool(2);

    // many segments: uniform sums are effectively gaussian, so the distance
    // is pure two-sample noise (~0.02 at this trial count)
    auto close = gaussian_surrogate(inst, inst.t / 256, 4000, 11, pool);
    CHECK(close.ks_element < 0.05);
    CHECK(close.ks_fidelity < 0.05);

    // one segment: a single uniform draw misses the gaussian tails; the
    // true distances here are ~0.05 (element) and ~0.12 (fidelity)
    auto far = gaussian_surrogate(inst, inst.t, 4000, 11, pool);
    CHECK(far.ks_element > 0.03);
    CHECK(far.ks_fidelity > 0.06);
    CHECK(far.ks_fidelity > 2.0 * close.ks_fidelity);
}

TEST_CASE("operator norms: svd and power iteration agree") {
    for (uint64_t k = 0; k < 8; ++k) {
        Eigen::MatrixXcd m(10, 10);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                m(i, j) = {counter_gaussian(600, k, i * 10 + j, 0),
                           counter_gaussian(600, k, i * 10 + j, 1)};
        double a = op_norm_svd(m);
        double b = op_norm_power(m);
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
    }
}

TEST_CASE("averaged perturbation: limits and fixed points") {
    auto geom = build_lattice(2, 2);
    auto h0 = lattice_h0_dense(geom, 1.0);
    auto v = lattice_v_dense(geom);

    SUBCASE("vanishing window returns the bare perturbation") {
        auto vb = averaged_perturbation(h0, v, 1e-14);
        CHECK((vb - v.cast<complex<double>>()).norm() <= 1e-9);
    }

    SUBCASE("commuting pair is untouched at any window") {
        Eigen::MatrixXd d1 = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
        Eigen::MatrixXd d2 = Eigen::Vector4d(4, 3, 2, 1).asDiagonal();
        for (double tau : {0.3, 1.7, 9.2}) {
            auto vb = averaged_perturbation(d1, d2, tau);
            CHECK((vb - d2.cast<complex<double>>()).norm() <= 1e-12);
        }
    }

    SUBCASE("full period lands exactly on the dephased projection") {
        auto vz = zeno_projection(h0, v);
        for (int k : {1, 2, 3}) {
            auto vb = averaged_perturbation(h0, v, k * M_PI / 1.0);
            CHECK((vb - vz).norm() <= 1e-12);
        }
    }

    SUBCASE("between zeros the residual decays like one over the window") {
        // every parallel-link element carries gap 4 delta0, so the residual
        // is |sinc(2 tau)| times a common block norm; at the envelope
        // extrema tau = (2m+1) pi/4 the ratios are exactly 1/(2m+1)
        auto vz = zeno_projection(h0, v);
        double r0 = (averaged_perturbation(h0, v, M_PI / 4) - vz).norm();
        double r1 = (averaged_perturbation(h0, v, 3 * M_PI / 4) - vz).norm();
        double r4 = (averaged_perturbation(h0, v, 9 * M_PI / 4) - vz).norm();
        CHECK(r0 > 1e-3);
        CHECK(r1 == doctest::Approx(r0 / 3.0).epsilon(1e-9));
        CHECK(r4 == doctest::Approx(r0 / 9.0).epsilon(1e-9));
    }
}

TEST_CASE("dephased projection is the flip-flop operator") {
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}}) {
        auto geom = build_lattice(r, c);
        auto h0 = lattice_h0_dense(geom, 1.0);
        auto v = lattice_v_dense(geom);
        auto vz = zeno_projection(h0, v);

        CHECK((vz - flip_flop_dense(geom)).norm() <= 1e-12);

        // it commutes with the clean hamiltonian
        Eigen::MatrixXcd h0c = h0.cast<complex<double>>();
        CHECK((vz * h0c - h0c * vz).norm() <= 1e-12);
    }
}

TEST_CASE("dephased contraction counts antiparallel links") {
    auto geom = build_lattice(2, 3);
    auto h0 = lattice_h0_dense(geom, 1.0);

    for (const char* bits : {"101010", "110100", "111111"}) {
        auto st = make_product_state(geom, bits);
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(64);
        psi(basis_index(bits)) = 1.0;

        // per-link projections applied independently; squared contraction
        // counts each antiparallel link once
        double total = 0.0;
        for (auto [i, j] : geom.links) {
            LatticeGeometry single = geom;
            single.links = {{i, j}};
            auto vl = lattice_v_dense(single);
            auto vzl = zeno_projection(h0, vl);
            total += std::real(
                (psi.adjoint() * (vzl * (vzl * psi)))(0, 0));
        }
        CHECK(total == doctest::Approx(double(st.n_antiparallel))
                           .epsilon(1e-12));
    }
}

TEST_CASE("ambiguous clean spectra are rejected") {
    Eigen::MatrixXd h0 = Eigen::Vector3d(0.0, 5e-7, 1.0).asDiagonal();
    Eigen::MatrixXd v(3, 3);
    v << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    CHECK_THROWS_AS(zeno_projection(h0, v, 1e-9, 1e3), NumericalError);
}

TEST_CASE("lattice instances match the piecewise propagator") {
    auto geom = build_lattice(2, 2);
    auto inst = lattice_instance(2, 2, 1.0, 2.0, {4});
    double vnorm = op_norm_svd(lattice_v_dense(geom).cast<complex<double>>());

    uint64_t seed = 13, trial = 2;
    int n = 4;
    double tau = inst.t / n;
    auto u = product_unitary(inst, tau, seed, trial);

    // reconstruct each column by evolving basis vectors with uniform
    // couplings xi_k / ||V|| on every link
    NoiseSchedule sched;
    sched.tau = tau;
    sched.horizon = inst.t;
    for (int k = 0; k < n; ++k) {
        Segment seg;
        seg.duration = tau;
        seg.d.assign(geom.n, 0.0);
        seg.c.assign(geom.links.size(),
                     theorem_noise(seed, trial, k) / vnorm);
        sched.segments.push_back(seg);
    }

    PropagatorMethod method;
    method.tolerance = 1e-12;
    for (int b = 0; b < 16; ++b) {
        StateVector e(16, {0, 0});
        e[b] = {1, 0};
        auto res = evolve_piecewise(geom, 1.0, sched, e, {}, method);
        for (int a = 0; a < 16; ++a)
            CHECK(std::abs(res.psi_final[a] - u(a, b)) <= 1e-9);
    }
}
