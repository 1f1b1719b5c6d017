#include "fidsim/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "fidsim/analytics.hpp"
#include "fidsim/csvio.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/stats.hpp"
#include "fidsim/theorem.hpp"

namespace fidsim {

namespace {

// N g(tau) + g(dt) with g at second order; the linear-regime reference the
// detector fits. Static points (tau >= t) fall out of the N=0 branch.
double reference_ell(double t, double tau, double delta0, double n_ud,
                     double n_uu) {
    double n = std::floor(t / tau + 1e-12);
    double dt = t - n * tau;
    if (dt < 1e-12 * std::max(1.0, t)) dt = 0.0;
    return n * g_tau_limit_small(tau, delta0, n_ud, n_uu) +
           g_tau_limit_small(dt, delta0, n_ud, n_uu);
}

bool is_commensurate(double t, double tau) {
    if (tau <= 0.0 || tau > t * (1.0 + 1e-9)) return false;
    double ratio = t / tau;
    double n = std::round(ratio);
    return n >= 1.0 && std::abs(ratio - n) <= 1e-6 * std::max(1.0, n);
}

} // namespace

DetectResult detect_tau_c(const ErrorCurve& curve, double epsilon,
                          double window_scale) {
    const CurveContext& ctx = curve.ctx;
    const double t = ctx.horizon;
    if (curve.sweep_variable != "tau")
        throw InputError("detect_tau_c needs a tau sweep, got '" +
                         curve.sweep_variable + "'");
    if (curve.points.size() < 10)
        throw InputError("detect_tau_c needs at least 10 curve points");
    if (!(t > 0.0)) throw InputError("detect_tau_c: curve has no horizon");
    if (ctx.n_ud <= 0)
        throw InputError("detect_tau_c: no antiparallel links, the deviation "
                         "range is empty");
    if (!(epsilon > 0.0)) throw InputError("detect_tau_c: epsilon must be positive");

    const double n_ud = ctx.n_ud, n_uu = ctx.n_uu;
    const double lo = tau_p(ctx.delta0);
    const double hi = 2.0 * lo * window_scale;

    struct Pt {
        double tau, e, se;
    };
    std::vector<Pt> fit, scan;
    for (const auto& p : curve.points) {
        bool comm = is_commensurate(t, p.x);
        bool is_static = p.x >= t * (1.0 - 1e-9);
        if (comm && p.x >= lo * (1.0 - 1e-9) && p.x <= hi * (1.0 + 1e-9))
            fit.push_back({p.x, p.e_mean, p.e_stderr});
        else if ((comm || is_static) && p.x > hi)
            scan.push_back({p.x, p.e_mean, p.e_stderr});
    }
    std::sort(scan.begin(), scan.end(),
              [](const Pt& a, const Pt& b) { return a.tau < b.tau; });

    if (fit.size() < 3)
        throw InputError("detect_tau_c: fewer than 3 switching-commensurate "
                         "points in the fit window");
    if (scan.empty())
        throw InputError("detect_tau_c: no commensurate points above the fit "
                         "window");

    double num = 0.0, den = 0.0;
    for (const auto& p : fit) {
        double l = reference_ell(t, p.tau, ctx.delta0, n_ud, n_uu);
        num += p.e * l;
        den += l * l;
    }
    if (!(den > 0.0)) throw InputError("detect_tau_c: degenerate fit window");
    const double amp = num / den;
    if (!(amp > 0.0))
        throw InputError("detect_tau_c: fitted amplitude is not positive");

    DetectResult out;
    out.amplitude = amp;
    out.threshold = epsilon * amp * n_ud * t * t;
    out.fit_points = static_cast<int>(fit.size());
    out.scan_points = static_cast<int>(scan.size());

    // calibrated deviations from the fitted reference
    std::vector<double> dev(scan.size()), err(scan.size());
    for (size_t i = 0; i < scan.size(); ++i) {
        double c = deviation_calibration(ctx.delta * scan[i].tau);
        dev[i] = (amp * reference_ell(t, scan[i].tau, ctx.delta0, n_ud, n_uu) -
                  scan[i].e) /
                 c;
        err[i] = scan[i].se / c;
    }
    auto qualifies = [&](size_t i) {
        return dev[i] >= out.threshold && dev[i] >= 3.0 * err[i];
    };
    for (size_t i = 0; i < scan.size(); ++i) {
        if (!qualifies(i)) continue;
        if (i + 1 < scan.size() && !qualifies(i + 1)) continue; // persistence
        out.reached = true;
        if (i == 0) {
            out.tau_c = scan[0].tau;
        } else {
            double d0 = dev[i - 1], d1 = dev[i];
            double f = (out.threshold - d0) / (d1 - d0);
            f = std::clamp(f, 0.0, 1.0);
            double span = scan[i].tau - scan[i - 1].tau;
            out.tau_c = scan[i - 1].tau + f * span;
            // first-order propagation of the two bracketing errors through
            // the crossing interpolation
            double gap = d1 - d0;
            if (gap > 0.0) {
                double g0 = (out.threshold - d1) / (gap * gap) * span;
                double g1 = (out.threshold - d0) / (gap * gap) * span;
                out.tau_c_stderr = std::sqrt(g0 * g0 * err[i - 1] * err[i - 1] +
                                             g1 * g1 * err[i] * err[i]);
            }
        }
        break;
    }
    return out;
}

std::vector<double> detection_grid(double t, double delta0, double delta,
                                   double epsilon, double window_scale) {
    if (!(t > 0.0)) throw InputError("detection_grid: horizon must be positive");
    if (!(delta > 0.0))
        throw InputError("detection_grid: needs a finite crossing, delta > 0");
    if (!(epsilon > 0.0))
        throw InputError("detection_grid: epsilon must be positive");

    const double lo = tau_p(delta0);
    const double hi = 2.0 * lo * window_scale;

    std::vector<double> grid;

    // fit window: up to 12 commensurate points spread geometrically
    int n_hi = static_cast<int>(std::floor(t / lo));
    int n_lo = static_cast<int>(std::ceil(t / hi));
    if (n_lo < 1) n_lo = 1;
    if (n_hi < n_lo)
        throw InputError("detection_grid: fit window holds no commensurate "
                         "points at this horizon");
    int span = n_hi - n_lo;
    int count = std::min(span + 1, 12);
    int last = -1;
    for (int k = 0; k < count; ++k) {
        double frac = count > 1 ? double(k) / (count - 1) : 0.0;
        int n = static_cast<int>(std::lround(
            n_lo * std::pow(double(n_hi) / n_lo, frac)));
        n = std::clamp(n, n_lo, n_hi);
        if (n != last) grid.push_back(t / n);
        last = n;
    }

    // scan band: every commensurate point bracketing the expected crossing
    double guess = tau_c(t, delta, epsilon);
    int n_min = std::max(1, static_cast<int>(std::ceil(t / (3.0 * guess))));
    int n_max = static_cast<int>(
        std::min(std::ceil(t / hi) - 1.0, std::floor(t / (0.5 * guess))));
    if (n_max < n_min)
        throw InputError("detection_grid: expected crossing sits inside the "
                         "fit window; enlarge the horizon");
    for (int n = n_min; n <= n_max; ++n) grid.push_back(t / n);

    grid.push_back(1.25 * t); // static reference
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) {
                               return std::abs(a - b) <= 1e-9 * std::max(a, b);
                           }),
               grid.end());
    return grid;
}

namespace {

CurveContext context_for(const ExperimentConfig& cfg,
                         const LatticeGeometry& geom) {
    auto [ud, uu] = link_census(geom, cfg.bits);
    CurveContext ctx;
    ctx.horizon = cfg.horizon;
    ctx.delta0 = cfg.params.delta0;
    ctx.delta = cfg.params.delta;
    ctx.bigJ = cfg.params.bigJ;
    ctx.sigma2 = cfg.params.sigma2;
    ctx.n_ud = ud;
    ctx.n_uu = uu;
    ctx.n_c = static_cast<int>(geom.links.size());
    ctx.convention = cfg.convention;
    ctx.seed = cfg.seed;
    return ctx;
}

EnsembleTask task_for(const ExperimentConfig& cfg, const LatticeGeometry& geom,
                      const ProductState& state) {
    EnsembleTask task;
    task.geom = &geom;
    task.params = cfg.params;
    task.state = state;
    task.horizon = cfg.horizon;
    task.tau = cfg.tau > 0.0 ? cfg.tau : cfg.horizon; // 0 = static
    task.seed = cfg.seed;
    task.realizations = cfg.realizations;
    task.method = cfg.method;
    task.convention = cfg.convention;
    return task;
}

} // namespace

CurveBuild build_curve(const ExperimentConfig& cfg, ThreadPool& pool) {
    validate_config(cfg, true);
    auto t0 = std::chrono::steady_clock::now();

    LatticeGeometry geom = build_lattice(cfg.rows, cfg.cols);
    ProductState state = make_product_state(geom, cfg.bits);

    CurveBuild out;
    out.curve.sweep_variable = cfg.sweep_variable;
    out.curve.ctx = context_for(cfg, geom);

    if (cfg.sweep_variable == "time") {
        double tmax = *std::max_element(cfg.grid.begin(), cfg.grid.end());
        if (tmax > cfg.horizon * (1.0 + 1e-9))
            throw ConfigError("config error\n  run.horizon: must cover the "
                              "largest sample time");
        EnsembleTask task = task_for(cfg, geom, state);
        out.curve = ensemble_time_curve(task, cfg.grid, pool);
        for (const auto& p : out.curve.points)
            out.point_stats.push_back({p.x, p.realizations, 0.0, 0});
    } else {
        // one ensemble per grid value; common seed -> common noise draws
        for (double x : cfg.grid) {
            EnsembleTask task = task_for(cfg, geom, state);
            if (cfg.sweep_variable == "tau")
                task.tau = x;
            else
                task.params.delta = x; // delta sweep
            EnsemblePoint ep = ensemble_error_point(task, pool);
            out.curve.points.push_back(
                {x, ep.e_mean, ep.e_stderr, cfg.realizations});
            out.point_stats.push_back(
                {x, cfg.realizations, ep.max_norm_defect, ep.floored});
        }
    }

    out.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
}

std::vector<std::pair<double, double>> analytic_overlay(
    const ExperimentConfig& cfg) {
    LatticeGeometry geom = build_lattice(cfg.rows, cfg.cols);
    auto [ud, uu] = link_census(geom, cfg.bits);
    std::vector<std::pair<double, double>> out;
    out.reserve(cfg.grid.size());
    for (double x : cfg.grid) {
        double e;
        if (cfg.sweep_variable == "tau") {
            e = predicted_error(cfg.horizon, x, cfg.params, ud, uu);
        } else if (cfg.sweep_variable == "time") {
            double tau_eff = cfg.tau > 0.0 ? cfg.tau : std::max(x, 1.0);
            e = predicted_error(x, tau_eff, cfg.params, ud, uu);
        } else {
            ModelParams p = cfg.params;
            p.delta = x;
            double tau_eff = cfg.tau > 0.0 ? cfg.tau : cfg.horizon;
            e = predicted_error(cfg.horizon, tau_eff, p, ud, uu);
        }
        out.push_back({x, e});
    }
    return out;
}

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::string& stem) {
    validate_config(cfg, true);
    std::filesystem::create_directories(cfg.output_dir);

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : std::max(1u, std::thread::hardware_concurrency());
    ThreadPool pool(workers);

    RunArtifacts art;
    art.build = build_curve(cfg, pool);
    const std::string hash = config_hash_hex(cfg);

    std::string curve_path = join_path(cfg.output_dir, stem + "-curve.csv");
    write_error_curve(curve_path, art.build.curve, hash,
                      {{"source", "ensemble"}});
    art.files.push_back(curve_path);

    auto overlay = analytic_overlay(cfg);
    std::vector<std::vector<std::string>> rows;
    rows.reserve(overlay.size());
    for (auto [x, e] : overlay)
        rows.push_back({format_double(x), format_double(e)});
    std::string overlay_path = join_path(cfg.output_dir, stem + "-analytic.csv");
    write_csv(overlay_path,
              {{"config_hash", hash},
               {"source", "analytic"},
               {"sweep_variable", cfg.sweep_variable}},
              {cfg.sweep_variable, "E_pred"}, rows);
    art.files.push_back(overlay_path);

    nlohmann::json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["config_hash"] = hash;
    manifest["config"] = serialize_config(cfg);
    manifest["seed"] = cfg.seed;
    manifest["workers"] = workers;
    manifest["wall_ms"] = art.build.wall_ms;
    // how each CSV row maps back to noise draws
    manifest["noise_stream"] =
        "realization r, segment s: onsite field j -> counter(seed, r, s, j); "
        "link l -> counter(seed, r, s, n_sites + l)";
    double worst = 0.0;
    nlohmann::json points = nlohmann::json::array();
    for (const auto& ps : art.build.point_stats) {
        worst = std::max(worst, ps.max_norm_defect);
        points.push_back({{"x", ps.x},
                          {"realizations", ps.realizations},
                          {"max_norm_defect", ps.max_norm_defect},
                          {"floored", ps.floored}});
    }
    manifest["max_norm_defect"] = worst;
    manifest["points"] = points;
    manifest["files"] = {curve_path, overlay_path};

    std::string manifest_path = join_path(cfg.output_dir, stem + "-manifest.json");
    std::ofstream mf(manifest_path);
    if (!mf) throw InputError("cannot open for writing: " + manifest_path);
    mf << manifest.dump(2) << "\n";
    art.files.push_back(manifest_path);
    return art;
}

std::vector<std::string> run_theorem_report(const ExperimentConfig& cfg,
                                            const std::string& stem) {
    validate_config(cfg, false);
    const TheoremConfig& tc = cfg.theorem;
    std::filesystem::create_directories(cfg.output_dir);

    TheoremInstance inst =
        tc.kind == "lattice"
            ? lattice_instance(tc.rows, tc.cols, cfg.params.delta0, tc.t,
                               tc.segment_counts)
            : random_instance(tc.dim, tc.t, tc.segment_counts, tc.seed);

    int workers = cfg.workers > 0
                      ? cfg.workers
                      : std::max(1u, std::thread::hardware_concurrency());
    ThreadPool pool(workers);
    auto t0 = std::chrono::steady_clock::now();
    ConvergenceReport rep =
        convergence_scan(inst, tc.trials, tc.epsilon, tc.seed, pool);
    double wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();

    ExperimentConfig hashed = cfg; // hash covers the full config text
    const std::string hash = config_hash_hex(hashed);

    std::vector<std::vector<std::string>> rows;
    for (const auto& r : rep.rows)
        rows.push_back({format_double(r.tau), std::to_string(r.n_segments),
                        format_double(r.median_dev), format_double(r.p_hat),
                        format_double(r.ci_lo), format_double(r.ci_hi)});
    std::string csv_path = join_path(cfg.output_dir, stem + "-convergence.csv");
    write_csv(csv_path,
              {{"config_hash", hash},
               {"kind", tc.kind},
               {"t", format_double(tc.t)},
               {"epsilon", format_double(tc.epsilon)},
               {"trials", std::to_string(tc.trials)},
               {"seed", std::to_string(tc.seed)}},
              {"tau", "N", "median_dev", "P_hat", "CI_lo", "CI_hi"}, rows);

    nlohmann::json summary;
    summary["tool"] = kToolName;
    summary["version"] = kToolVersion;
    summary["config_hash"] = hash;
    summary["kind"] = tc.kind;
    summary["fitted_exponent"] = rep.fitted_exponent;
    summary["exponent_r2"] = rep.exponent_r2;
    summary["epsilon"] = rep.epsilon;
    summary["trials"] = rep.trials;
    summary["wall_ms"] = wall_ms;
    std::string json_path = join_path(cfg.output_dir, stem + "-summary.json");
    std::ofstream jf(json_path);
    if (!jf) throw InputError("cannot open for writing: " + json_path);
    jf << summary.dump(2) << "\n";
    return {csv_path, json_path};
}

InsetResult reproduce_fig3_inset(const std::vector<ExperimentConfig>& configs,
                                 ThreadPool& pool) {
    std::set<double> deltas;
    std::set<int> sizes;
    for (const auto& cfg : configs) {
        deltas.insert(cfg.params.delta);
        sizes.insert(cfg.rows * cfg.cols);
    }
    if (deltas.size() < 4 || sizes.size() < 2)
        throw InputError("inset reproduction needs >= 4 deltas and >= 2 sizes");

    InsetResult out;
    std::vector<double> xs, ys;
    for (const auto& cfg : configs) {
        CurveBuild cb = build_curve(cfg, pool);
        DetectResult det =
            detect_tau_c(cb.curve, cfg.detect_epsilon, cfg.detect_window_scale);
        TauCPoint p;
        p.delta = cfg.params.delta;
        p.n = cfg.rows * cfg.cols;
        p.reached = det.reached;
        p.tau_c = det.reached ? det.tau_c : 0.0;
        out.points.push_back(p);
        if (det.reached) {
            xs.push_back(cfg.params.delta);
            ys.push_back(det.tau_c);
        }
    }
    if (xs.size() < 4)
        throw NumericalError("inset reproduction: fewer than 4 detected kinks");
    LinearFit fit = fit_loglog(xs, ys);
    out.exponent = fit.slope;
    out.r2 = fit.r2;
    return out;
}

} // namespace fidsim
