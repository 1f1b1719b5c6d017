#include "fidsim/observables.hpp"

#include <cmath>
#include <complex>

#include "fidsim/errors.hpp"
#include "fidsim/noise.hpp"
#include "fidsim/stats.hpp"

namespace fidsim {

std::string convention_name(Convention c) {
    return c == Convention::mean_log ? "mean_log" : "log_mean";
}

Convention convention_from_name(const std::string& name) {
    if (name == "mean_log") return Convention::mean_log;
    if (name == "log_mean") return Convention::log_mean;
    throw ConfigError("unknown averaging convention: " + name);
}

double error_of_fidelity(double f) {
    if (f <= 0.0) throw InputError("fidelity must be positive");
    if (f > 1.0 + 1e-10) throw InputError("fidelity above 1");
    if (f < kFidelityFloor) f = kFidelityFloor;
    return -std::log(std::min(f, 1.0));
}

namespace {

struct RealizationOutcome {
    double f = 1.0;
    double max_defect = 0.0;
    bool failed = false;
    std::string what;
};

std::vector<RealizationOutcome> run_realizations(
    const EnsembleTask& task, const std::vector<double>& sample_times,
    std::vector<std::vector<double>>* per_time_f, ThreadPool& pool) {
    if (task.realizations < 1)
        throw InputError("ensemble needs at least one realization");
    StateVector psi0 = initial_state_vector(*task.geom, task.state);
    std::vector<RealizationOutcome> out(task.realizations);
    if (per_time_f)
        per_time_f->assign(sample_times.size(),
                           std::vector<double>(task.realizations, 1.0));

    pool.parallel_for(task.realizations, [&](int r) {
        RealizationOutcome& o = out[r];
        try {
            NoiseSchedule sched =
                sample_schedule(*task.geom, task.params, task.tau,
                                task.horizon, task.seed, r);
            EvolutionResult res =
                evolve_piecewise(*task.geom, task.params.delta0, sched, psi0,
                                 sample_times, task.method);
            o.max_defect = res.stats.max_norm_defect;
            if (!sample_times.empty()) {
                for (size_t i = 0; i < sample_times.size(); ++i)
                    (*per_time_f)[i][r] = res.fidelity_samples[i].second;
                o.f = res.fidelity_samples.back().second;
            } else {
                std::complex<double> ov = 0.0;
                for (size_t i = 0; i < psi0.size(); ++i)
                    ov += std::conj(psi0[i]) * res.psi_final[i];
                o.f = std::norm(ov);
            }
        } catch (const std::exception& e) {
            o.failed = true;
            o.what = e.what();
        }
    });

    for (int r = 0; r < task.realizations; ++r)
        if (out[r].failed)
            throw NumericalError("realization " + std::to_string(r) +
                                 " failed: " + out[r].what);
    return out;
}

EnsemblePoint reduce_point(const std::vector<double>& fs,
                           Convention convention, double max_defect) {
    EnsemblePoint p;
    p.max_norm_defect = max_defect;
    std::vector<double> es;
    es.reserve(fs.size());
    for (double f : fs) {
        double fl = f;
        if (fl < kFidelityFloor) {
            fl = kFidelityFloor;
            p.floored++;
        }
        if (fl > 1.0) fl = 1.0;
        es.push_back(-std::log(fl));
    }
    if (convention == Convention::mean_log) {
        p.e_mean = mean(es);
        p.e_stderr = es.size() >= 2 ? stderr_mean(es) : 0.0;
    } else {
        double fm = mean(fs);
        p.e_mean = -std::log(std::max(fm, kFidelityFloor));
        // delta method: var(-ln Fbar) ~ var(Fbar)/Fbar^2
        p.e_stderr = fs.size() >= 2 ? stderr_mean(fs) / std::max(fm, 1e-300)
                                    : 0.0;
    }
    return p;
}

} // namespace

EnsemblePoint ensemble_error_point(const EnsembleTask& task, ThreadPool& pool) {
    auto outcomes = run_realizations(task, {}, nullptr, pool);
    std::vector<double> fs;
    fs.reserve(outcomes.size());
    double max_defect = 0.0;
    for (const auto& o : outcomes) {
        fs.push_back(o.f);
        max_defect = std::max(max_defect, o.max_defect);
    }
    return reduce_point(fs, task.convention, max_defect);
}

ErrorCurve ensemble_time_curve(const EnsembleTask& task,
                               const std::vector<double>& sample_times,
                               ThreadPool& pool) {
    if (sample_times.empty())
        throw InputError("time curve needs sample times");
    std::vector<std::vector<double>> per_time_f;
    auto outcomes = run_realizations(task, sample_times, &per_time_f, pool);
    double max_defect = 0.0;
    for (const auto& o : outcomes)
        max_defect = std::max(max_defect, o.max_defect);

    ErrorCurve curve;
    curve.sweep_variable = "time";
    curve.ctx.horizon = task.horizon;
    curve.ctx.delta0 = task.params.delta0;
    curve.ctx.delta = task.params.delta;
    curve.ctx.bigJ = task.params.bigJ;
    curve.ctx.sigma2 = task.params.sigma2;
    curve.ctx.n_ud = task.state.n_antiparallel;
    curve.ctx.n_uu = task.state.n_parallel;
    curve.ctx.n_c = task.state.n_antiparallel + task.state.n_parallel;
    curve.ctx.convention = task.convention;
    curve.ctx.seed = task.seed;
    for (size_t i = 0; i < sample_times.size(); ++i) {
        EnsemblePoint p =
            reduce_point(per_time_f[i], task.convention, max_defect);
        curve.points.push_back(
            {sample_times[i], p.e_mean, p.e_stderr, task.realizations});
    }
    return curve;
}

DecayFit fit_decay(const ErrorCurve& curve, double window_lo, double window_hi,
                   size_t min_points) {
    std::vector<double> ts, t2s, es;
    for (const auto& p : curve.points) {
        if (p.e_mean >= window_lo && p.e_mean <= window_hi && p.x > 0.0) {
            ts.push_back(p.x);
            t2s.push_back(p.x * p.x);
            es.push_back(p.e_mean);
        }
    }
    if (ts.size() < min_points)
        throw NumericalError("decay fit window holds " +
                             std::to_string(ts.size()) + " points, needs " +
                             std::to_string(min_points));
    LinearFit fe = fit_through_origin(ts, es);
    LinearFit fg = fit_through_origin(t2s, es);
    DecayFit fit;
    fit.r2_exponential = fe.r2;
    fit.r2_gaussian = fg.r2;
    if (fe.r2 >= fg.r2) {
        fit.shape = DecayFit::Shape::exponential;
        fit.rate = fe.slope;
    } else {
        fit.shape = DecayFit::Shape::gaussian;
        fit.rate = fg.slope > 0.0 ? std::sqrt(fg.slope) : 0.0;
    }
    return fit;
}

} // namespace fidsim
