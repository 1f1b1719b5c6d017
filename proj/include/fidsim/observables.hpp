#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fidsim/lattice.hpp"
#include "fidsim/propagator.hpp"
#include "fidsim/threadpool.hpp"

namespace fidsim {

// ensemble averaging convention: mean of -ln F (default) or -ln of mean F
enum class Convention { mean_log, log_mean };

std::string convention_name(Convention c);
Convention convention_from_name(const std::string& name);

inline constexpr double kFidelityFloor = 1e-300;

// E = -ln F; F below the floor is a domain error
double error_of_fidelity(double f);

// Physics context attached to a curve so downstream analysis (threshold
// detection, analytic overlays) can run from the curve alone.
struct CurveContext {
    double horizon = 0.0;
    double delta0 = 1.0;
    double delta = 0.0;
    double bigJ = 0.0;
    double sigma2 = 1.0 / 12.0;
    int n_ud = 0;
    int n_uu = 0;
    int n_c = 0;
    Convention convention = Convention::mean_log;
    uint64_t seed = 0;
};

struct CurvePoint {
    double x = 0.0;
    double e_mean = 0.0;
    double e_stderr = 0.0;
    int realizations = 0;
};

struct ErrorCurve {
    std::string sweep_variable; // time | tau | delta
    CurveContext ctx;
    std::vector<CurvePoint> points;
};

struct EnsembleTask {
    const LatticeGeometry* geom = nullptr;
    ModelParams params;
    ProductState state;
    double horizon = 0.0;
    double tau = 0.0; // tau >= horizon means a single static draw
    uint64_t seed = 0;
    int realizations = 0;
    PropagatorMethod method;
    Convention convention = Convention::mean_log;
};

struct EnsemblePoint {
    double e_mean = 0.0;
    double e_stderr = 0.0;
    double max_norm_defect = 0.0;
    int floored = 0; // realizations that hit the fidelity floor
};

// Fidelity error at the horizon, averaged over realizations
// 0..R-1 (seeds derived per realization index). Deterministic in content
// regardless of pool size.
EnsemblePoint ensemble_error_point(const EnsembleTask& task, ThreadPool& pool);

// Mean error at each sample time over the ensemble (time-resolved curves)
ErrorCurve ensemble_time_curve(const EnsembleTask& task,
                               const std::vector<double>& sample_times,
                               ThreadPool& pool);

struct DecayFit {
    enum class Shape { exponential, gaussian };
    Shape shape = Shape::exponential;
    double rate = 0.0; // Gamma: F = exp(-Gamma t) or exp(-Gamma^2 t^2)
    double r2_exponential = 0.0;
    double r2_gaussian = 0.0;
};

// Classifies a time curve as exponential (E linear in t) vs gaussian
// (E quadratic in t) inside the error window [window_lo, window_hi].
DecayFit fit_decay(const ErrorCurve& curve, double window_lo = 0.05,
                   double window_hi = 2.0, size_t min_points = 8);

} // namespace fidsim
