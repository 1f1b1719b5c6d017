#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fidsim/config.hpp"
#include "fidsim/csvio.hpp"
#include "fidsim/errors.hpp"
#include "fidsim/recipes.hpp"
#include "fidsim/runner.hpp"

namespace {

struct Overrides {
    uint64_t seed = 0;
    int realizations = 0;
    std::string output_dir;
    int workers = -1;
    CLI::Option *seed_opt = nullptr, *real_opt = nullptr, *dir_opt = nullptr,
                *workers_opt = nullptr;

    void apply(fidsim::ExperimentConfig& cfg) const {
        if (seed_opt->count()) cfg.seed = seed;
        if (seed_opt->count()) cfg.theorem.seed = seed;
        if (real_opt->count()) cfg.realizations = realizations;
        if (dir_opt->count()) cfg.output_dir = output_dir;
        if (workers_opt->count()) cfg.workers = workers;
    }
};

std::string stem_of(const std::string& path) {
    std::string s = std::filesystem::path(path).stem().string();
    return s.empty() ? "run" : s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise-constant noise fidelity experiments"};
    app.set_version_flag("--version", fidsim::kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    ov.seed_opt = app.add_option("--seed", ov.seed, "override base RNG seed");
    ov.real_opt = app.add_option("--realizations", ov.realizations,
                                 "override realization count");
    ov.dir_opt = app.add_option("--output-dir", ov.output_dir,
                                "override output directory");
    ov.workers_opt =
        app.add_option("--workers", ov.workers, "worker threads (0 = all cores)");

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "execute one configured sweep");
    run_cmd->add_option("config", run_config, "config file")->required();

    std::string recipe_name, recipe_scale = "desk";
    auto* recipe_cmd =
        app.add_subcommand("recipe", "execute a pinned figure preset");
    recipe_cmd->add_option("name", recipe_name, "preset name")->required();
    recipe_cmd->add_option("--scale", recipe_scale, "desk | full")
        ->check(CLI::IsMember({"desk", "full"}));

    auto* analyze_cmd = app.add_subcommand("analyze", "post-process curve files");
    analyze_cmd->require_subcommand(1);
    analyze_cmd->fallthrough();
    std::string tauc_csv;
    double tauc_epsilon = 1.0 / 40.0;
    double tauc_window = 2.0;
    auto* tauc_cmd = analyze_cmd->add_subcommand(
        "tau-c", "threshold detection on an error-vs-tau curve");
    tauc_cmd->add_option("csv", tauc_csv, "curve CSV")->required();
    tauc_cmd->add_option("--epsilon", tauc_epsilon, "deviation fraction");
    tauc_cmd->add_option("--window-scale", tauc_window,
                         "fit window stretch factor");

    std::string theorem_config;
    auto* theorem_cmd =
        app.add_subcommand("theorem", "convergence scan for a configured instance");
    theorem_cmd->add_option("config", theorem_config, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            fidsim::ExperimentConfig cfg = fidsim::parse_config_file(run_config);
            ov.apply(cfg);
            fidsim::validate_config(cfg, true);
            auto art = fidsim::run_experiment(cfg, stem_of(run_config));
            for (const auto& f : art.files) std::printf("wrote %s\n", f.c_str());
        } else if (*recipe_cmd) {
            fidsim::validate_recipes();
            auto scale = recipe_scale == "full" ? fidsim::RecipeScale::full
                                                : fidsim::RecipeScale::desk;
            auto runs = fidsim::expand_recipe(recipe_name, scale);
            for (auto& r : runs) {
                ov.apply(r.cfg);
                std::vector<std::string> files;
                if (r.kind == "theorem")
                    files = fidsim::run_theorem_report(r.cfg, r.name);
                else
                    files = fidsim::run_experiment(r.cfg, r.name).files;
                for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
            }
        } else if (*tauc_cmd) {
            fidsim::ErrorCurve curve = fidsim::read_error_curve(tauc_csv);
            fidsim::DetectResult det =
                fidsim::detect_tau_c(curve, tauc_epsilon, tauc_window);
            if (det.reached)
                std::printf("tau_c = %.6g\n", det.tau_c);
            else
                std::printf("tau_c not reached\n");
            std::printf("amplitude = %.6g threshold = %.6g fit_points = %d "
                        "scan_points = %d\n",
                        det.amplitude, det.threshold, det.fit_points,
                        det.scan_points);
        } else if (*theorem_cmd) {
            fidsim::ExperimentConfig cfg =
                fidsim::parse_config_file(theorem_config);
            ov.apply(cfg);
            fidsim::validate_config(cfg, false);
            auto files =
                fidsim::run_theorem_report(cfg, stem_of(theorem_config));
            for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        }
    } catch (const fidsim::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const fidsim::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const fidsim::InputError& e) {
        std::fprintf(stderr, "config error\n  %s\n", e.what());
        return 2;
    } catch (const fidsim::CapabilityError& e) {
        std::fprintf(stderr, "config error\n  %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
