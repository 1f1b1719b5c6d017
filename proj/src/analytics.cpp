#include "fidsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fidsim/errors.hpp"
#include "fidsim/quadrature.hpp"

namespace fidsim {

double sinc(double x) {
    double ax = std::abs(x);
    if (ax < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double g_tau(double tau, double delta, double delta0, double n_ud, double n_uu,
             double abs_tol) {
    if (tau < 0.0) throw InputError("tau must be non-negative");
    if (tau == 0.0) return 0.0;
    auto integrand = [=](double u) {
        double s = sinc(delta * u);
        return (tau - u) * s * s * (n_ud + n_uu * std::cos(4.0 * delta0 * u));
    };
    // resolve both oscillation scales before trusting error estimates
    double panel = tau;
    if (delta0 > 0.0) panel = std::min(panel, std::numbers::pi / (8.0 * delta0));
    if (delta > 0.0) panel = std::min(panel, std::numbers::pi / (4.0 * delta));
    return 2.0 * adaptive_simpson(integrand, 0.0, tau, abs_tol / 2.0, panel);
}

double g_tau_limit_small(double tau, double delta0, double n_ud, double n_uu) {
    double s = sinc(2.0 * delta0 * tau);
    return tau * tau * (n_ud + n_uu * s * s);
}

double g_tau_limit_fgr(double tau, double delta, double n_ud) {
    if (delta <= 0.0 || tau <= 0.0)
        throw InputError("fgr limit needs positive delta and tau");
    double x = delta * tau;
    return n_ud / (delta * delta) *
           (std::numbers::pi * x - std::log(2.0 * x) - std::numbers::egamma -
            1.0);
}

double g_tau_correction(double tau, double delta, double n_ud) {
    if (delta == 0.0) return n_ud * tau * tau;
    double x = delta * tau;
    double x2 = x * x;
    return n_ud / (delta * delta) * (x2 - x2 * x2 / 18.0);
}

namespace {

// floor(t/tau) with a snap so integral ratios survive rounding
int whole_segments(double t, double tau) {
    double ratio = t / tau;
    double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest))
        return static_cast<int>(nearest);
    return static_cast<int>(std::floor(ratio));
}

} // namespace

double predicted_error(double t, double tau, const ModelParams& params,
                       double n_ud, double n_uu) {
    if (t < 0.0) throw InputError("t must be non-negative");
    if (tau <= 0.0) throw InputError("tau must be positive");
    int n = whole_segments(t, tau);
    double dt = t - n * tau;
    if (dt < 1e-12 * std::max(1.0, t)) dt = 0.0;
    double pref = 4.0 * params.bigJ * params.bigJ * params.sigma2;
    double g1 = g_tau(tau, params.delta, params.delta0, n_ud, n_uu);
    double g2 = dt > 0.0 ? g_tau(dt, params.delta, params.delta0, n_ud, n_uu)
                         : 0.0;
    return pref * (n * g1 + g2);
}

double tau_p(double delta0) { return std::numbers::pi / (4.0 * delta0); }

double tau_c(double t, double delta, double epsilon) {
    if (t <= 0.0 || delta <= 0.0 || epsilon <= 0.0)
        throw InputError("tau_c needs positive t, delta, epsilon");
    return std::cbrt(18.0 * epsilon * t) / std::pow(delta, 2.0 / 3.0);
}

ScalingSlopes scaling_slopes(const ModelParams& params, double t, double n_c,
                             double n_ud) {
    double pref = 4.0 * params.bigJ * params.bigJ * params.sigma2 * t;
    ScalingSlopes s;
    s.pre_kink = pref * n_c;
    s.linear = pref * n_ud;
    s.ergodic = pref * n_ud;
    s.plateau = params.delta > 0.0
                    ? pref * n_ud * std::numbers::pi / params.delta
                    : std::numeric_limits<double>::infinity();
    return s;
}

Regime regime_of(double tau, double taup, double tauc, bool fgr) {
    if (tau < taup) return Regime::pre_kink;
    if (tau < tauc) return Regime::linear;
    return fgr ? Regime::fgr_saturated : Regime::ergodic_saturating;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::pre_kink: return "pre-kink";
        case Regime::linear: return "linear";
        case Regime::ergodic_saturating: return "ergodic-saturating";
        case Regime::fgr_saturated: return "fgr-saturated";
    }
    return "unknown";
}

double ZenoCoefficients::eps_eff(double norm_v, double t, double tau) const {
    if (t <= 0.0 || tau <= 0.0) throw InputError("eps_eff needs positive times");
    return std::sqrt(sigma2) * norm_v * std::sqrt(tau / t);
}

ZenoCoefficients zeno_coefficients(const ModelParams& params, double n_c,
                                   double n_ud) {
    ZenoCoefficients z;
    z.sigma2 = params.sigma2;
    double pref = 4.0 * params.bigJ * params.bigJ * params.sigma2;
    z.tau_z_inv_sq = pref * n_c;
    z.gamma_erg = pref * n_ud;
    return z;
}

double deviation_calibration(double delta_tau) {
    double x2 = delta_tau * delta_tau;
    double c = 1.0 - x2 / 18.75 + x2 * x2 / 490.0;
    return std::clamp(c, 0.5, 1.0);
}

} // namespace fidsim
