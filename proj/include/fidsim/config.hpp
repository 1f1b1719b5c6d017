#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fidsim/observables.hpp"
#include "fidsim/propagator.hpp"

namespace fidsim {

// Flat INI-style config: [section] headers, key = value lines, '#' comments.
// Unknown keys are errors; diagnostics name the offending field.

struct TheoremConfig {
    std::string kind = "lattice"; // lattice | random
    int rows = 2, cols = 3;
    int dim = 32;
    double t = 2.0;
    std::vector<int> segment_counts = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
    int trials = 48;
    double epsilon = 0.05;
    uint64_t seed = 1;
};

struct ExperimentConfig {
    int rows = 2, cols = 5;
    std::string bits; // initial product state; required for run
    ModelParams params;
    std::string sweep_variable; // time | tau | delta
    std::vector<double> grid;
    double horizon = 25.0;
    double tau = 0.0; // switching interval for time sweeps; 0 = static
    std::vector<double> sample_times; // optional, for time curves
    int realizations = 50;
    uint64_t seed = 1;
    Convention convention = Convention::mean_log;
    PropagatorMethod method;
    double detect_epsilon = 1.0 / 40.0;
    double detect_window_scale = 2.0; // fit window [tau_p, 2 tau_p * scale]
    std::string output_dir = ".";
    int workers = 0; // 0 = hardware concurrency
    TheoremConfig theorem;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// collects all field-level problems; throws ConfigError listing them
void validate_config(const ExperimentConfig& cfg, bool for_run);

uint64_t fnv1a64(std::string_view s);

// canonical serialization (sorted keys, 17-digit floats); its FNV-1a hash
// is the config hash embedded in outputs
std::string serialize_config(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

} // namespace fidsim
