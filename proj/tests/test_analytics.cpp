#include <doctest.h>

#include <cmath>
#include <vector>

#include "fidsim/analytics.hpp"
#include "fidsim/quadrature.hpp"

using namespace fidsim;

namespace {

ModelParams fgr_params() {
    ModelParams p;
    p.delta = 0.3;
    p.bigJ = 5e-3;
    return p;
}

// independent two-variable oracle: g as the nested double integral
// 2 int_0^tau dt int_0^t du sinc^2(delta u) [n_ud + n_uu cos(4 delta0 u)]
double g_tau_nested(double tau, double delta, double delta0, double n_ud,
                    double n_uu) {
    auto inner = [&](double t) {
        return adaptive_simpson(
            [&](double u) {
                double s = sinc(delta * u);
                return s * s * (n_ud + n_uu * std::cos(4.0 * delta0 * u));
            },
            0.0, t, 1e-12, 0.25);
    };
    return 2.0 * adaptive_simpson(inner, 0.0, tau, 1e-10, 0.25);
}

} // namespace

TEST_CASE("sinc handles the removable singularity") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(M_PI) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sinc(0.5) == doctest::Approx(std::sin(0.5) / 0.5).epsilon(1e-15));
    // series branch must join the direct branch smoothly
    double x = 1e-5;
    CHECK(sinc(x) == doctest::Approx(1.0 - x * x / 6.0).epsilon(1e-14));
    CHECK(std::abs(sinc(1.0001e-4) - sinc(0.9999e-4)) < 1e-11);
}

TEST_CASE("segment kernel vanishes at zero and matches the nested oracle") {
    CHECK(g_tau(0.0, 0.3, 1.0, 8, 5) == 0.0);

    // Fubini reduction against the direct double integral
    struct Probe {
        double tau, delta, n_ud, n_uu;
    };
    std::vector<Probe> probes = {
        {0.5, 0.3, 8, 5},  {1.0, 0.3, 8, 5},  {2.0, 0.5, 8, 5},
        {3.0, 0.1, 13, 0}, {0.8, 0.0, 8, 5},  {5.0, 0.3, 8, 5},
        {1.7, 0.7, 3, 4},  {4.2, 0.2, 13, 0}, {2.6, 0.45, 5, 8},
        {0.3, 0.9, 2, 1},
    };
    for (auto& q : probes) {
        double direct = g_tau_nested(q.tau, q.delta, 1.0, q.n_ud, q.n_uu);
        double reduced = g_tau(q.tau, q.delta, 1.0, q.n_ud, q.n_uu);
        CHECK(std::abs(direct - reduced) <=
              1e-8 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("zero-dephasing closed form") {
    // delta = 0: g = n_ud tau^2 + n_uu sin^2(2 delta0 tau) / (4 delta0^2)
    for (double tau : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        double closed = g_tau_limit_small(tau, 1.0, 8, 5);
        double quad = g_tau(tau, 0.0, 1.0, 8, 5);
        CHECK(std::abs(quad - closed) <= 1e-10 * std::max(1.0, closed));
    }
    // pure antiparallel: exactly n_ud tau^2
    CHECK(g_tau(3.0, 0.0, 1.0, 8, 0) == doctest::Approx(72.0).epsilon(1e-12));
    // parallel term vanishes at tau = pi/(2 delta0)
    double taup2 = M_PI / 2.0;
    CHECK(g_tau_limit_small(taup2, 1.0, 0, 1) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("large-dephasing asymptotics") {
    // reference regime: delta tau = 6
    double g6 = g_tau(20.0, 0.3, 1.0, 1, 0);
    double a6 = g_tau_limit_fgr(20.0, 0.3, 1);
    CHECK(std::abs(a6 - g6) / g6 < 0.02);

    // deep regime: delta tau = 30
    double g30 = g_tau(100.0, 0.3, 1.0, 1, 0, 1e-12);
    double a30 = g_tau_limit_fgr(100.0, 0.3, 1);
    CHECK(std::abs(a30 - g30) / g30 < 0.05);
    CHECK(std::abs(a30 - g30) / g30 < 2e-3); // the form is sharp, not just close

    // parallel contribution is subleading: full census approaches the
    // antiparallel-only asymptote
    double gfull = g_tau(100.0, 0.3, 1.0, 8, 5, 1e-12);
    double afull = g_tau_limit_fgr(100.0, 0.3, 8);
    CHECK(std::abs(afull - gfull) / gfull < 0.03);
}

TEST_CASE("asymptote pins the euler-mascheroni constant") {
    // gamma = pi delta tau - ln(2 delta tau) - 1 - delta^2 g_fgr / n_ud
    double tau = 40.0, delta = 0.5;
    double g = g_tau_limit_fgr(tau, delta, 1);
    double gamma = M_PI * delta * tau - std::log(2.0 * delta * tau) - 1.0 -
                   delta * delta * g;
    CHECK(gamma == doctest::Approx(0.5772156649).epsilon(1e-9));
}

TEST_CASE("asymptotic slope approaches pi n_ud / delta") {
    double delta = 0.4;
    double h = 1e-3;
    double slope =
        (g_tau_limit_fgr(5000.0 + h, delta, 8) -
         g_tau_limit_fgr(5000.0 - h, delta, 8)) / (2.0 * h);
    CHECK(slope == doctest::Approx(M_PI * 8 / delta).epsilon(1e-3));
}

TEST_CASE("quartic correction tracks the kernel at small delta tau") {
    // correction form: (n_ud/delta^2) [(delta tau)^2 - (delta tau)^4 / 18]
    double delta = 0.5, tau = 2.0; // delta tau = 1
    double corr = g_tau_correction(tau, delta, 1);
    CHECK(corr ==
          doctest::Approx(tau * tau * (1.0 - 1.0 / 18.0)).epsilon(1e-12));

    for (double dt : {0.2, 0.4, 0.6, 0.8}) {
        double tau_i = dt / delta;
        double exact = g_tau(tau_i, delta, 1.0, 8, 0);
        double approx = g_tau_correction(tau_i, delta, 8);
        CHECK(std::abs(approx - exact) / exact < 0.01);
    }
}

TEST_CASE("deviation calibration matches the exact quartic ratio") {
    // (g_small - g) / (n_ud delta^2 tau^4 / 18) has the exact expansion
    // 1 - (delta tau)^2 / 18.75 + ...
    CHECK(deviation_calibration(0.0) == 1.0);
    // outside the fitted range the quartic turns back up; the clamp keeps
    // the factor in [1/2, 1] either way
    CHECK(deviation_calibration(10.0) == 1.0);
    CHECK(deviation_calibration(3.8) >= 0.5);
    CHECK(deviation_calibration(3.8) <= 0.75);

    double delta = 0.4;
    for (double dt : {0.4, 0.8, 1.2}) {
        double tau = dt / delta;
        double g = g_tau(tau, delta, 1.0, 1, 0, 1e-13);
        double gs = g_tau_limit_small(tau, 1.0, 1, 0);
        double quartic = delta * delta * tau * tau * tau * tau / 18.0;
        double exact_ratio = (gs - g) / quartic;
        double tol = dt <= 0.8 ? 0.005 : 0.02;
        CHECK(std::abs(deviation_calibration(dt) - exact_ratio) /
                  exact_ratio < tol);
    }
}

TEST_CASE("kernel is convex and slope-monotone when n_ud >= n_uu") {
    for (auto census : {std::pair{8.0, 5.0}, {13.0, 0.0}}) {
        std::vector<double> g;
        double h = 0.1;
        for (int i = 0; i <= 120; ++i)
            g.push_back(
                g_tau(h * i, 0.3, 1.0, census.first, census.second, 1e-11));
        for (size_t i = 1; i + 1 < g.size(); ++i)
            CHECK(g[i + 1] - 2.0 * g[i] + g[i - 1] >= -1e-9);
    }
}

TEST_CASE("predicted error: structure in tau") {
    auto p = fgr_params();
    double t = 25.0;

    SUBCASE("no coupling, no error") {
        ModelParams q = p;
        q.bigJ = 0.0;
        for (double tau : {0.5, 2.0, 40.0})
            CHECK(predicted_error(t, tau, q, 8, 5) == 0.0);
    }

    SUBCASE("static regime reads the full-horizon kernel") {
        double direct = 4.0 * p.bigJ * p.bigJ * p.sigma2 *
                        g_tau(t, p.delta, p.delta0, 8, 5);
        CHECK(predicted_error(t, 40.0, p, 8, 5) ==
              doctest::Approx(direct).epsilon(1e-12));
    }

    SUBCASE("monotone below the crossover") {
        double tc = tau_c(t, p.delta, 1.0 / 40.0);
        double prev = 0.0;
        for (int i = 1; i <= 100; ++i) {
            double tau = tc * i / 100.0;
            double e = predicted_error(t, tau, p, 8, 5);
            CHECK(e >= prev - 1e-12 * std::max(1.0, e));
            prev = e;
        }
    }

    SUBCASE("convexity bound with equality at commensurate tau") {
        double bound_scale = 4.0 * p.bigJ * p.bigJ * p.sigma2 * t;
        for (double tau : {0.9, 1.7, 2.3, 3.9, 6.1, 11.3}) {
            double e = predicted_error(t, tau, p, 8, 5);
            double bound =
                bound_scale * g_tau(tau, p.delta, p.delta0, 8, 5) / tau;
            CHECK(e <= bound * (1.0 + 1e-12));
        }
        for (int n : {2, 5, 10, 25}) {
            double tau = t / n;
            double e = predicted_error(t, tau, p, 8, 5);
            double bound =
                bound_scale * g_tau(tau, p.delta, p.delta0, 8, 5) / tau;
            CHECK(e == doctest::Approx(bound).epsilon(1e-12));
        }
    }

    SUBCASE("horizon shorter than the period is a static draw") {
        CHECK(predicted_error(3.0, 7.0, p, 8, 5) ==
              doctest::Approx(4.0 * p.bigJ * p.bigJ * p.sigma2 *
                              g_tau(3.0, p.delta, p.delta0, 8, 5))
                  .epsilon(1e-12));
    }
}

TEST_CASE("kink location") {
    CHECK(tau_p(1.0) == doctest::Approx(0.7853981634).epsilon(1e-9));
    CHECK(tau_p(2.0) == doctest::Approx(M_PI / 8.0).epsilon(1e-12));
}

TEST_CASE("crossover scale and its dephasing scaling") {
    // (18 epsilon t)^{1/3} / delta^{2/3}
    CHECK(tau_c(25.0, 0.3, 1.0 / 40.0) == doctest::Approx(5.0).epsilon(0.02));
    CHECK(tau_c(50.0, 0.3, 1.0 / 40.0) ==
          doctest::Approx(6.2996).epsilon(1e-4));

    double base = tau_c(50.0, 0.1, 1.0 / 40.0);
    for (double d : {0.2, 0.3, 0.5}) {
        double expect = base * std::pow(0.1 / d, 2.0 / 3.0);
        CHECK(tau_c(50.0, d, 1.0 / 40.0) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("scaling slopes and the kink slope ratio") {
    auto p = fgr_params();
    auto s = scaling_slopes(p, 25.0, 13, 8);

    // 4 J^2 sigma^2 t n_c and friends, from independent arithmetic
    double unit = 4.0 * 5e-3 * 5e-3 * (1.0 / 12.0) * 25.0;
    CHECK(s.pre_kink == doctest::Approx(unit * 13).epsilon(1e-12));
    CHECK(s.linear == doctest::Approx(unit * 8).epsilon(1e-12));
    CHECK(s.ergodic == doctest::Approx(unit * 8).epsilon(1e-12));
    CHECK(s.plateau ==
          doctest::Approx(unit * 8 * M_PI / 0.3).epsilon(1e-12));
    CHECK(s.pre_kink == doctest::Approx(2.7083333e-3).epsilon(1e-7));
    CHECK(s.plateau == doctest::Approx(1.7453293e-2).epsilon(1e-7));

    // ratio across the kink is the census ratio
    CHECK(s.pre_kink / s.linear == doctest::Approx(13.0 / 8.0).epsilon(1e-12));

    // slopes integrate back to the predicted error in their windows:
    // below the kink E ~ pre_kink * tau
    double tau_small = 0.05;
    CHECK(predicted_error(25.0, tau_small, p, 8, 5) ==
          doctest::Approx(s.pre_kink * tau_small).epsilon(2e-3));
    // in the linear window, commensurate points track linear * tau
    double tau_lin = 2.5;
    CHECK(predicted_error(25.0, tau_lin, p, 8, 5) ==
          doctest::Approx(s.linear * tau_lin).epsilon(0.1));
}

TEST_CASE("regime classification is right-closed") {
    double tp = tau_p(1.0), tc = 5.0;
    CHECK(regime_of(tp / 2, tp, tc, true) == Regime::pre_kink);
    CHECK(regime_of(tp, tp, tc, true) == Regime::linear);
    CHECK(regime_of(3.0, tp, tc, true) == Regime::linear);
    CHECK(regime_of(tc, tp, tc, true) == Regime::fgr_saturated);
    CHECK(regime_of(40.0, tp, tc, true) == Regime::fgr_saturated);
    CHECK(regime_of(40.0, tp, tc, false) == Regime::ergodic_saturating);

    CHECK(regime_name(Regime::pre_kink) != regime_name(Regime::linear));
    CHECK(!regime_name(Regime::fgr_saturated).empty());
}

TEST_CASE("zeno coefficients reproduce the slopes") {
    auto p = fgr_params();
    auto z = zeno_coefficients(p, 13, 8);
    auto s = scaling_slopes(p, 25.0, 13, 8);

    CHECK(z.tau_z_inv_sq ==
          doctest::Approx(4.0 * p.bigJ * p.bigJ * 13 * p.sigma2)
              .epsilon(1e-12));
    CHECK(z.gamma_erg ==
          doctest::Approx(4.0 * p.bigJ * p.bigJ * 8 * p.sigma2)
              .epsilon(1e-12));

    // E ~ t tau / tau_Z^2 below the kink, E ~ Gamma_erg t tau above
    CHECK(25.0 * z.tau_z_inv_sq == doctest::Approx(s.pre_kink).epsilon(1e-12));
    CHECK(25.0 * z.gamma_erg == doctest::Approx(s.linear).epsilon(1e-12));

    // checkerboard state: every link antiparallel, the two rates merge
    auto zn = zeno_coefficients(p, 13, 13);
    CHECK(zn.tau_z_inv_sq == doctest::Approx(zn.gamma_erg).epsilon(1e-15));

    // effective coupling scales as sqrt(tau/t)
    double e1 = z.eps_eff(2.0, 25.0, 1.0);
    double e4 = z.eps_eff(2.0, 25.0, 4.0);
    CHECK(e4 / e1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e1 ==
          doctest::Approx(std::sqrt(p.sigma2) * 2.0 * std::sqrt(1.0 / 25.0))
              .epsilon(1e-12));
}
