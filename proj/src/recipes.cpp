#include "fidsim/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fidsim/analytics.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/lattice.hpp"

namespace fidsim {

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw InputError("log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> out(count);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (!(hi > lo) || count < 2)
        throw InputError("linear_grid: need lo < hi and count >= 2");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * i / (count - 1);
    out.back() = hi;
    return out;
}

std::vector<double> commensurate_grid(double t, double lo) {
    if (!(t > 0.0) || !(lo > 0.0))
        throw InputError("commensurate_grid: need positive t and lo");
    std::vector<double> out;
    for (int n = 1; t / n >= lo; ++n) out.push_back(t / n);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<double> merge_grids(std::vector<double> a,
                                const std::vector<double>& b, double rel_tol) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::vector<double> out;
    for (double x : a) {
        if (!out.empty() && std::abs(x - out.back()) <= rel_tol * std::abs(x))
            continue;
        out.push_back(x);
    }
    return out;
}

std::vector<double> decay_time_grid(double horizon, int count) {
    if (count < 8) throw InputError("decay_time_grid: count too small");
    // log half resolves the early decay, linear half the tail
    auto lg = log_grid(horizon * 1e-3, horizon, count / 2);
    auto ln = linear_grid(horizon / (count / 2), horizon, count / 2);
    return merge_grids(std::move(lg), ln, 1e-9);
}

namespace {

// pinned initial states: mixed-census half-filling witnesses and the
// all-antiparallel checkerboard, per lattice size
struct StatePick {
    int rows, cols;
    const char* mixed;
    int mixed_ud, mixed_uu;
    const char* checker;
};

const StatePick kStates[] = {
    {2, 5, "1010110100", 8, 5, "0101010101"},
    {2, 6, "101011010010", 12, 4, "010101101010"},
    {2, 7, "10101101001010", 13, 6, "01010101010101"},
};

const StatePick& pick_state(int rows, int cols) {
    for (const auto& s : kStates)
        if (s.rows == rows && s.cols == cols) return s;
    throw ConfigError("no pinned initial state for lattice " +
                      std::to_string(rows) + "x" + std::to_string(cols));
}

ExperimentConfig base_config(int rows, int cols, bool checker = false) {
    ExperimentConfig cfg;
    const StatePick& s = pick_state(rows, cols);
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.bits = checker ? s.checker : s.mixed;
    cfg.params.delta0 = 1.0;
    return cfg;
}

std::vector<double> fig_tau_grid(double t) {
    // log spread below the oscillation scale, switching-commensurate above
    auto grid = merge_grids(log_grid(0.1, 50.0, 40), commensurate_grid(t, 0.75));
    if (grid.back() < 1.25 * t) grid.push_back(1.25 * t); // static reference
    return grid;
}

void expand_fig1(std::vector<RecipeRun>& runs, RecipeScale scale) {
    const bool full = scale == RecipeScale::full;
    const double taus[] = {1, 3, 5, 10, 20, 25};
    for (double tau : taus) {
        RecipeRun r;
        r.name = "fig1-tau" + std::to_string(static_cast<int>(tau));
        r.cfg = base_config(2, full ? 7 : 5);
        r.cfg.params.bigJ = 2e-2;
        r.cfg.params.delta = 4e-1;
        r.cfg.sweep_variable = "time";
        r.cfg.horizon = 25.0;
        r.cfg.tau = tau;
        r.cfg.grid = decay_time_grid(25.0);
        r.cfg.realizations = full ? 500 : 50;
        runs.push_back(std::move(r));
    }
}

void expand_fig1_inset(std::vector<RecipeRun>& runs, RecipeScale scale) {
    const bool full = scale == RecipeScale::full;
    for (int which = 0; which < 2; ++which) {
        RecipeRun r;
        r.name = which == 0 ? "fig1-inset-fgr" : "fig1-inset-ergodic";
        r.cfg = base_config(2, full ? 7 : 5);
        r.cfg.params.bigJ = 2e-2;
        r.cfg.params.delta = which == 0 ? 4e-1 : 2e-2; // ergodic: delta = J
        r.cfg.sweep_variable = "time";
        r.cfg.horizon = 25.0;
        r.cfg.tau = 0.0; // static imperfections
        r.cfg.grid = decay_time_grid(25.0);
        r.cfg.realizations = 100;
        runs.push_back(std::move(r));
    }
}

void expand_fig2(std::vector<RecipeRun>& runs, RecipeScale scale) {
    const bool full = scale == RecipeScale::full;
    struct Set {
        const char* name;
        double delta;
        bool checker;
    };
    const Set sets[] = {
        {"fig2-fgr", 3e-1, false},          // circles, census (8,5)
        {"fig2-ergodic", 5e-3, false},      // squares, census (8,5)
        {"fig2-ergodic-neel", 5e-3, true},  // triangles, census (13,0)
    };
    for (const Set& s : sets) {
        RecipeRun r;
        r.name = s.name;
        r.cfg = base_config(2, 5, s.checker);
        r.cfg.params.bigJ = 5e-3;
        r.cfg.params.delta = s.delta;
        r.cfg.sweep_variable = "tau";
        r.cfg.horizon = 25.0;
        r.cfg.grid = fig_tau_grid(25.0);
        r.cfg.realizations = full ? 400 : 50;
        runs.push_back(std::move(r));
    }
}

void expand_fig3(std::vector<RecipeRun>& runs, RecipeScale scale, bool inset) {
    const bool full = scale == RecipeScale::full;
    std::vector<int> cols_list = inset ? (full ? std::vector<int>{5, 6, 7}
                                               : std::vector<int>{5, 6})
                                       : std::vector<int>{5};
    const double deltas[] = {0.1, 0.2, 0.3, 0.5};
    // detection noise grows as the kink flattens; realizations follow 1/delta
    auto full_r = [](double d) {
        return d <= 0.1 ? 2000 : d <= 0.2 ? 800 : d <= 0.3 ? 400 : 200;
    };
    for (int cols : cols_list) {
        std::string stem = inset ? "fig3-inset-n" + std::to_string(2 * cols) + "-"
                                 : "fig3-";
        for (double d : deltas) {
            RecipeRun r;
            char dn[16];
            std::snprintf(dn, sizeof dn, "d%g", d);
            r.name = stem + dn;
            r.cfg = base_config(2, cols);
            r.cfg.params.bigJ = 5e-3;
            r.cfg.params.delta = d;
            r.cfg.sweep_variable = "tau";
            r.cfg.horizon = 50.0;
            r.cfg.grid = fig_tau_grid(50.0);
            r.cfg.realizations = full ? full_r(d) : 50;
            runs.push_back(std::move(r));
        }
        if (!inset) {
            RecipeRun r;
            r.name = stem + "ergodic";
            r.cfg = base_config(2, cols);
            r.cfg.params.bigJ = 5e-3;
            r.cfg.params.delta = 5e-3; // delta = J
            r.cfg.sweep_variable = "tau";
            r.cfg.horizon = 50.0;
            r.cfg.grid = fig_tau_grid(50.0);
            r.cfg.realizations = full ? 200 : 50;
            runs.push_back(std::move(r));
        }
    }
}

void expand_theorem(std::vector<RecipeRun>& runs, RecipeScale scale) {
    const bool full = scale == RecipeScale::full;
    for (int which = 0; which < 2; ++which) {
        RecipeRun r;
        r.kind = "theorem";
        r.name = which == 0 ? "theorem-lattice" : "theorem-random";
        // no lattice run here, so no pinned state; the instance geometry
        // lives under cfg.theorem
        r.cfg.params.delta0 = 1.0;
        r.cfg.theorem.kind = which == 0 ? "lattice" : "random";
        r.cfg.theorem.rows = 2;
        r.cfg.theorem.cols = 3;
        r.cfg.theorem.dim = 32;
        r.cfg.theorem.t = 2.0;
        r.cfg.theorem.trials = full ? 200 : 48;
        r.cfg.theorem.epsilon = 0.05;
        runs.push_back(std::move(r));
    }
}

} // namespace

std::vector<std::string> recipe_names() {
    return {"fig1", "fig1-inset", "fig2", "fig3", "fig3-inset", "theorem"};
}

std::vector<RecipeRun> expand_recipe(const std::string& name, RecipeScale scale) {
    std::vector<RecipeRun> runs;
    if (name == "fig1") expand_fig1(runs, scale);
    else if (name == "fig1-inset") expand_fig1_inset(runs, scale);
    else if (name == "fig2") expand_fig2(runs, scale);
    else if (name == "fig3") expand_fig3(runs, scale, false);
    else if (name == "fig3-inset") expand_fig3(runs, scale, true);
    else if (name == "theorem") expand_theorem(runs, scale);
    else throw ConfigError("unknown recipe '" + name + "'; known: fig1, fig1-inset, fig2, fig3, fig3-inset, theorem");
    for (auto& r : runs) validate_config(r.cfg, r.kind == "run");
    return runs;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("recipe drift: " + what);
}

void check_census(const ExperimentConfig& cfg, int want_ud, int want_uu) {
    LatticeGeometry geom = build_lattice(cfg.rows, cfg.cols);
    auto [ud, uu] = link_census(geom, cfg.bits);
    require(ud == want_ud && uu == want_uu,
            cfg.bits + " census (" + std::to_string(ud) + "," +
                std::to_string(uu) + ") != (" + std::to_string(want_ud) + "," +
                std::to_string(want_uu) + ")");
}

} // namespace

void validate_recipes() {
    // pinned initial states carry the advertised link censuses
    for (const auto& s : kStates) {
        ExperimentConfig m = base_config(s.rows, s.cols);
        check_census(m, s.mixed_ud, s.mixed_uu);
        ExperimentConfig c = base_config(s.rows, s.cols, true);
        check_census(c, s.mixed_ud + s.mixed_uu, 0);
    }

    auto fig1 = expand_recipe("fig1", RecipeScale::desk);
    require(fig1.size() == 6, "fig1 has six switching intervals");
    const double taus[] = {1, 3, 5, 10, 20, 25};
    for (size_t i = 0; i < fig1.size(); ++i) {
        const auto& c = fig1[i].cfg;
        require(c.params.bigJ == 2e-2 && c.params.delta == 4e-1,
                "fig1 couplings J=2e-2, delta=4e-1");
        require(c.horizon == 25.0 && c.tau == taus[i], "fig1 horizon/tau set");
    }
    require(expand_recipe("fig1", RecipeScale::full)[0].cfg.rows *
                    expand_recipe("fig1", RecipeScale::full)[0].cfg.cols == 14,
            "fig1 full scale runs 14 qubits");

    auto inset = expand_recipe("fig1-inset", RecipeScale::desk);
    require(inset.size() == 2 && inset[0].cfg.params.delta == 4e-1 &&
                inset[1].cfg.params.delta == inset[1].cfg.params.bigJ &&
                inset[0].cfg.tau == 0.0 && inset[1].cfg.tau == 0.0,
            "fig1-inset static pair (FGR, ergodic delta=J)");

    auto fig2 = expand_recipe("fig2", RecipeScale::desk);
    require(fig2.size() == 3, "fig2 has three sets");
    for (const auto& r : fig2)
        require(r.cfg.horizon == 25.0 && r.cfg.params.bigJ == 5e-3 &&
                    r.cfg.rows * r.cfg.cols == 10,
                "fig2 t=25, J=5e-3, n=10");
    require(fig2[0].cfg.params.delta == 3e-1, "fig2 FGR delta=0.3");
    require(fig2[1].cfg.params.delta == 5e-3 && fig2[2].cfg.params.delta == 5e-3,
            "fig2 ergodic delta=5e-3");
    check_census(fig2[0].cfg, 8, 5);
    check_census(fig2[2].cfg, 13, 0);
    // grid spans [0.1, 50] and keeps every switching-commensurate point
    // below the horizon so threshold detection sees the sawtooth tops
    const auto& g2 = fig2[0].cfg.grid;
    require(g2.front() == 0.1 && g2.back() >= 25.0, "fig2 grid spans [0.1, 50]");
    for (int n = 1; n <= 33; ++n) {
        double tau = 25.0 / n;
        if (tau < 0.75) break;
        bool found = false;
        for (double x : g2)
            if (std::abs(x - tau) <= 1e-9 * tau) { found = true; break; }
        require(found, "fig2 grid holds commensurate point 25/" + std::to_string(n));
    }

    auto fig3 = expand_recipe("fig3", RecipeScale::desk);
    require(fig3.size() == 5, "fig3 has four FGR sets plus ergodic");
    const double deltas[] = {0.1, 0.2, 0.3, 0.5};
    for (int i = 0; i < 4; ++i)
        require(fig3[i].cfg.params.delta == deltas[i] &&
                    fig3[i].cfg.horizon == 50.0 &&
                    fig3[i].cfg.params.bigJ == 5e-3,
                "fig3 t=50, J=5e-3, delta set");
    require(fig3[4].cfg.params.delta == fig3[4].cfg.params.bigJ,
            "fig3 ergodic set has delta=J");

    auto fi = expand_recipe("fig3-inset", RecipeScale::desk);
    require(fi.size() == 8, "fig3-inset sweeps 4 deltas x 2 sizes at desk scale");
    require(expand_recipe("fig3-inset", RecipeScale::full).size() == 12,
            "fig3-inset full adds n=14");

    auto th = expand_recipe("theorem", RecipeScale::desk);
    require(th.size() == 2 && th[0].cfg.theorem.kind == "lattice" &&
                th[1].cfg.theorem.kind == "random" &&
                th[1].cfg.theorem.dim == 32 && th[0].cfg.theorem.t == 2.0,
            "theorem pair (lattice 2x3, random dim 32)");
}

} // namespace fidsim
