#pragma once

#include <string>
#include <vector>

#include "fidsim/config.hpp"

namespace fidsim {

enum class RecipeScale { desk, full };

// A recipe expands into one or more named runs, each a complete config.
struct RecipeRun {
    std::string name;            // output file stem
    std::string kind = "run";    // run | theorem
    ExperimentConfig cfg;
};

std::vector<std::string> recipe_names();

// Expands a preset into configs. Desk scale keeps CI-friendly sizes;
// full scale is long-running and excluded from CI.
std::vector<RecipeRun> expand_recipe(const std::string& name, RecipeScale scale);

// Cross-checks every preset against its pinned parameters (couplings,
// horizons, grids, link censuses); throws ConfigError on drift.
void validate_recipes();

// grid helpers (deterministic, duplicate-free)
std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> linear_grid(double lo, double hi, int count);
// switching-commensurate grid {t/N : N >= 1, t/N >= lo}, ascending
std::vector<double> commensurate_grid(double t, double lo);
// union with relative dedup tolerance
std::vector<double> merge_grids(std::vector<double> a,
                                const std::vector<double>& b,
                                double rel_tol = 1e-9);
// 200-point log/linear mix used for time-resolved decay curves
std::vector<double> decay_time_grid(double horizon, int count = 200);

} // namespace fidsim
