#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fidsim/config.hpp"
#include "fidsim/observables.hpp"
#include "fidsim/threadpool.hpp"

namespace fidsim {

inline constexpr const char* kToolName = "fidsim";
inline constexpr const char* kToolVersion = "0.3.0";

struct DetectResult {
    bool reached = false;
    double tau_c = std::numeric_limits<double>::quiet_NaN();
    double tau_c_stderr = 0.0; // propagated through the crossing interpolation
    double amplitude = 0.0; // fitted curve prefactor, estimates 4 J^2 sigma^2
    double threshold = 0.0; // epsilon x (vertical range: amplitude n_ud t^2)
    int fit_points = 0;
    int scan_points = 0;
};

// Threshold criterion on an E(tau) curve at fixed horizon: amplitude-fit the
// second-order reference on switching-commensurate points in the window
// [tau_p, 2 tau_p * window_scale], then scan commensurate points above the
// window for the first deviation exceeding epsilon times the saturation
// range. Deviations are divided by the quartic-order calibration so the
// crossing matches the closed-form tau_c estimate; a crossing must clear
// 3x its standard error and persist to the next scan point.
DetectResult detect_tau_c(const ErrorCurve& curve, double epsilon,
                          double window_scale = 2.0);

// Economical tau grid for threshold detection at dephasing `delta`: up to
// twelve commensurate points spread over the fit window, every commensurate
// point in a scan band around the closed-form crossing estimate, and one
// static point at 1.25 t. Sorted ascending.
std::vector<double> detection_grid(double t, double delta0, double delta,
                                   double epsilon, double window_scale = 2.0);

struct PointStats {
    double x = 0.0;
    int realizations = 0;
    double max_norm_defect = 0.0;
    int floored = 0;
};

struct CurveBuild {
    ErrorCurve curve;
    std::vector<PointStats> point_stats;
    double wall_ms = 0.0;
};

// Monte Carlo curve for any sweep kind (tau | time | delta). Realization r
// of every point draws from the counter stream (seed, r, ...), so curves
// with equal seeds share noise across grid values and coupling strengths.
CurveBuild build_curve(const ExperimentConfig& cfg, ThreadPool& pool);

// matching closed-form curve on the same grid
std::vector<std::pair<double, double>> analytic_overlay(const ExperimentConfig& cfg);

struct RunArtifacts {
    std::vector<std::string> files;
    CurveBuild build;
};

// full run: curve CSV + analytic overlay CSV + JSON manifest under
// cfg.output_dir, file names starting with `stem`
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& stem);

// convergence report for the configured instance: CSV of
// (tau, N, median_dev, P_hat, CI_lo, CI_hi) + JSON summary
std::vector<std::string> run_theorem_report(const ExperimentConfig& cfg,
                                            const std::string& stem);

struct TauCPoint {
    double delta = 0.0;
    int n = 0;
    bool reached = false;
    double tau_c = 0.0;
};

struct InsetResult {
    std::vector<TauCPoint> points;
    double exponent = 0.0; // pooled log tau_c vs log delta slope
    double r2 = 0.0;
};

// Runs detect_tau_c per config (each a tau sweep at one delta and size) and
// fits the pooled scaling exponent. Needs >= 4 deltas and >= 2 sizes.
InsetResult reproduce_fig3_inset(const std::vector<ExperimentConfig>& configs,
                                 ThreadPool& pool);

} // namespace fidsim
