#pragma once

#include <string>

#include "fidsim/lattice.hpp"

namespace fidsim {

// sin(x)/x with the removable singularity handled
double sinc(double x);

// Segment error kernel: g(tau) = 2 int_0^tau (tau-u) sinc^2(delta u)
// [n_ud + n_uu cos(4 delta0 u)] du, by adaptive quadrature (the exact
// single-integral reduction of the nested double integral).
double g_tau(double tau, double delta, double delta0, double n_ud, double n_uu,
             double abs_tol = 1e-10);

// small-(delta tau) form: tau^2 [n_ud + n_uu sinc^2(2 delta0 tau)]
double g_tau_limit_small(double tau, double delta0, double n_ud, double n_uu);

// Large-(delta tau) asymptotics: (n_ud/delta^2)[pi delta tau - ln(2 delta tau)
// - gamma_E - 1]. The pi multiplies the leading term only; that is the form
// the quadrature actually approaches (checked to <0.1% for delta tau >= 6).
double g_tau_limit_fgr(double tau, double delta, double n_ud);

// quartic correction: (n_ud/delta^2)[(delta tau)^2 - (delta tau)^4/18]
double g_tau_correction(double tau, double delta, double n_ud);

// E_t(tau) = 4 J^2 sigma^2 (N g(tau) + g(dt)), N = floor(t/tau), dt = t - N tau
double predicted_error(double t, double tau, const ModelParams& params,
                       double n_ud, double n_uu);

double tau_p(double delta0);

// tau_c = (18 epsilon t)^{1/3} / delta^{2/3}
double tau_c(double t, double delta, double epsilon);

struct ScalingSlopes {
    double pre_kink = 0.0;  // slope 4 J^2 sigma^2 t n_c, tau < tau_p
    double linear = 0.0;    // slope 4 J^2 sigma^2 t n_ud, tau_p < tau < tau_c
    double ergodic = 0.0;   // same slope continuing above tau_c (ergodic case)
    double plateau = 0.0;   // saturation level 4 J^2 sigma^2 t n_ud pi / delta
};

ScalingSlopes scaling_slopes(const ModelParams& params, double t, double n_c,
                             double n_ud);

enum class Regime { pre_kink, linear, ergodic_saturating, fgr_saturated };

// boundaries belong to the right-hand regime
Regime regime_of(double tau, double taup, double tauc, bool fgr);
std::string regime_name(Regime r);

struct ZenoCoefficients {
    double tau_z_inv_sq = 0.0; // 4 J^2 n_c sigma^2
    double gamma_erg = 0.0;    // 4 J^2 n_ud sigma^2
    double sigma2 = 0.0;
    // effective coupling felt at switching period tau over horizon t:
    // sigma ||V|| / sqrt(N) with N = t / tau
    double eps_eff(double norm_v, double t, double tau) const;
};

ZenoCoefficients zeno_coefficients(const ModelParams& params, double n_c,
                                   double n_ud);

// Relative size of the exact deviation g_small - g against its quartic
// leading term (n_ud delta^2 tau^4 / 18); used to calibrate threshold
// crossings back to the quartic order that defines tau_c.
double deviation_calibration(double delta_tau);

} // namespace fidsim
