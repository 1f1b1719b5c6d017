#include "fidsim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fidsim/errors.hpp"

namespace fidsim {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + v + "' as a number");
    }
    if (pos != v.size())
        throw ConfigError(key + ": trailing junk in number '" + v + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long long x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + v + "' as an integer");
    }
    if (pos != v.size())
        throw ConfigError(key + ": trailing junk in integer '" + v + "'");
    return x;
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    size_t pos = 0;
    unsigned long long x;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + v + "' as an unsigned integer");
    }
    if (pos != v.size())
        throw ConfigError(key + ": trailing junk in integer '" + v + "'");
    return x;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<int>(parse_int(key, item)));
    }
    return out;
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        std::string full = section.empty() ? key : section + "." + key;
        if (kv.count(full))
            throw ConfigError("duplicate key '" + full + "'");
        kv[full] = val;
    }

    ExperimentConfig cfg;
    auto take = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };

    if (auto* v = take("lattice.rows")) cfg.rows = (int)parse_int("lattice.rows", *v);
    if (auto* v = take("lattice.cols")) cfg.cols = (int)parse_int("lattice.cols", *v);
    if (auto* v = take("lattice.bits")) cfg.bits = *v;
    if (auto* v = take("params.delta0")) cfg.params.delta0 = parse_double("params.delta0", *v);
    if (auto* v = take("params.delta")) cfg.params.delta = parse_double("params.delta", *v);
    if (auto* v = take("params.J")) cfg.params.bigJ = parse_double("params.J", *v);
    if (auto* v = take("sweep.variable")) cfg.sweep_variable = *v;
    if (auto* v = take("sweep.grid")) cfg.grid = parse_double_list("sweep.grid", *v);
    if (auto* v = take("run.horizon")) cfg.horizon = parse_double("run.horizon", *v);
    if (auto* v = take("run.tau")) cfg.tau = parse_double("run.tau", *v);
    if (auto* v = take("run.sample_times"))
        cfg.sample_times = parse_double_list("run.sample_times", *v);
    if (auto* v = take("run.workers")) cfg.workers = (int)parse_int("run.workers", *v);
    if (auto* v = take("ensemble.realizations"))
        cfg.realizations = (int)parse_int("ensemble.realizations", *v);
    if (auto* v = take("ensemble.seed")) cfg.seed = parse_u64("ensemble.seed", *v);
    if (auto* v = take("ensemble.convention"))
        cfg.convention = convention_from_name(*v);
    if (auto* v = take("propagator.kind")) {
        if (*v == "krylov") cfg.method.kind = PropagatorKind::krylov;
        else if (*v == "dense") cfg.method.kind = PropagatorKind::dense_exponential;
        else throw ConfigError("propagator.kind: must be krylov or dense, got '" + *v + "'");
    }
    if (auto* v = take("propagator.krylov_dim"))
        cfg.method.krylov_dim = (int)parse_int("propagator.krylov_dim", *v);
    if (auto* v = take("propagator.substep"))
        cfg.method.substep = parse_double("propagator.substep", *v);
    if (auto* v = take("propagator.tolerance"))
        cfg.method.tolerance = parse_double("propagator.tolerance", *v);
    if (auto* v = take("detect.epsilon"))
        cfg.detect_epsilon = parse_double("detect.epsilon", *v);
    if (auto* v = take("detect.window_scale"))
        cfg.detect_window_scale = parse_double("detect.window_scale", *v);
    if (auto* v = take("output.dir")) cfg.output_dir = *v;
    if (auto* v = take("theorem.kind")) cfg.theorem.kind = *v;
    if (auto* v = take("theorem.rows")) cfg.theorem.rows = (int)parse_int("theorem.rows", *v);
    if (auto* v = take("theorem.cols")) cfg.theorem.cols = (int)parse_int("theorem.cols", *v);
    if (auto* v = take("theorem.dim")) cfg.theorem.dim = (int)parse_int("theorem.dim", *v);
    if (auto* v = take("theorem.t")) cfg.theorem.t = parse_double("theorem.t", *v);
    if (auto* v = take("theorem.segment_counts"))
        cfg.theorem.segment_counts = parse_int_list("theorem.segment_counts", *v);
    if (auto* v = take("theorem.trials"))
        cfg.theorem.trials = (int)parse_int("theorem.trials", *v);
    if (auto* v = take("theorem.epsilon"))
        cfg.theorem.epsilon = parse_double("theorem.epsilon", *v);
    if (auto* v = take("theorem.seed")) cfg.theorem.seed = parse_u64("theorem.seed", *v);

    static const char* known[] = {
        "lattice.rows", "lattice.cols", "lattice.bits", "params.delta0",
        "params.delta", "params.J", "sweep.variable", "sweep.grid",
        "run.horizon", "run.tau", "run.sample_times", "run.workers",
        "ensemble.realizations", "ensemble.seed", "ensemble.convention",
        "propagator.kind", "propagator.krylov_dim", "propagator.substep",
        "propagator.tolerance", "detect.epsilon", "detect.window_scale",
        "output.dir", "theorem.kind", "theorem.rows", "theorem.cols",
        "theorem.dim", "theorem.t", "theorem.segment_counts",
        "theorem.trials", "theorem.epsilon", "theorem.seed"};
    for (const auto& [key, val] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok) throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate_config(const ExperimentConfig& cfg, bool for_run) {
    std::vector<std::string> problems;
    if (cfg.rows < 1 || cfg.cols < 1)
        problems.push_back("lattice.rows/cols: must be positive");
    else if (static_cast<long long>(cfg.rows) * cfg.cols > kMaxQubits)
        problems.push_back("lattice: qubit count exceeds cap of " +
                           std::to_string(kMaxQubits));
    if (for_run) {
        int n = cfg.rows * cfg.cols;
        if (cfg.bits.empty())
            problems.push_back("lattice.bits: required for a run");
        else if (static_cast<int>(cfg.bits.size()) != n)
            problems.push_back("lattice.bits: length " +
                               std::to_string(cfg.bits.size()) +
                               " does not match n=" + std::to_string(n));
        else
            for (char b : cfg.bits)
                if (b != '0' && b != '1') {
                    problems.push_back("lattice.bits: must be 0/1 only");
                    break;
                }
        if (cfg.sweep_variable != "time" && cfg.sweep_variable != "tau" &&
            cfg.sweep_variable != "delta")
            problems.push_back("sweep.variable: must be time, tau, or delta, got '" +
                               cfg.sweep_variable + "'");
        if (cfg.grid.empty()) problems.push_back("sweep.grid: empty sweep grid");
        for (double x : cfg.grid)
            if (x <= 0.0 && cfg.sweep_variable != "time") {
                problems.push_back("sweep.grid: values must be positive");
                break;
            }
    }
    if (cfg.params.delta0 <= 0.0) problems.push_back("params.delta0: must be positive");
    if (cfg.params.delta < 0.0) problems.push_back("params.delta: must be non-negative");
    if (cfg.params.bigJ < 0.0) problems.push_back("params.J: must be non-negative");
    if (cfg.horizon < 0.0) problems.push_back("run.horizon: must be non-negative");
    if (cfg.tau < 0.0) problems.push_back("run.tau: must be non-negative");
    if (cfg.realizations < 1)
        problems.push_back("ensemble.realizations: must be at least 1");
    if (cfg.method.krylov_dim < 4)
        problems.push_back("propagator.krylov_dim: must be at least 4");
    if (cfg.method.tolerance <= 0.0)
        problems.push_back("propagator.tolerance: must be positive");
    if (cfg.method.substep <= 0.0)
        problems.push_back("propagator.substep: must be positive");
    if (cfg.detect_epsilon <= 0.0)
        problems.push_back("detect.epsilon: must be positive");
    if (cfg.detect_window_scale < 1.0)
        problems.push_back("detect.window_scale: must be at least 1");
    if (cfg.workers < 0) problems.push_back("run.workers: must be >= 0");
    if (cfg.theorem.kind != "lattice" && cfg.theorem.kind != "random")
        problems.push_back("theorem.kind: must be lattice or random");
    if (cfg.theorem.trials < 20)
        problems.push_back("theorem.trials: must be at least 20");
    for (int n : cfg.theorem.segment_counts)
        if (n < 1) {
            problems.push_back("theorem.segment_counts: must be positive");
            break;
        }
    if (!problems.empty()) {
        std::string msg = "config error";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "lattice.rows=" << cfg.rows << "\n";
    os << "lattice.cols=" << cfg.cols << "\n";
    os << "lattice.bits=" << cfg.bits << "\n";
    os << "params.delta0=" << fmt17(cfg.params.delta0) << "\n";
    os << "params.delta=" << fmt17(cfg.params.delta) << "\n";
    os << "params.J=" << fmt17(cfg.params.bigJ) << "\n";
    os << "sweep.variable=" << cfg.sweep_variable << "\n";
    os << "sweep.grid=";
    for (size_t i = 0; i < cfg.grid.size(); ++i)
        os << (i ? "," : "") << fmt17(cfg.grid[i]);
    os << "\n";
    os << "run.horizon=" << fmt17(cfg.horizon) << "\n";
    os << "run.tau=" << fmt17(cfg.tau) << "\n";
    os << "run.sample_times=";
    for (size_t i = 0; i < cfg.sample_times.size(); ++i)
        os << (i ? "," : "") << fmt17(cfg.sample_times[i]);
    os << "\n";
    os << "ensemble.realizations=" << cfg.realizations << "\n";
    os << "ensemble.seed=" << cfg.seed << "\n";
    os << "ensemble.convention=" << convention_name(cfg.convention) << "\n";
    os << "propagator.kind="
       << (cfg.method.kind == PropagatorKind::krylov ? "krylov" : "dense")
       << "\n";
    os << "propagator.krylov_dim=" << cfg.method.krylov_dim << "\n";
    os << "propagator.substep=" << fmt17(cfg.method.substep) << "\n";
    os << "propagator.tolerance=" << fmt17(cfg.method.tolerance) << "\n";
    os << "detect.epsilon=" << fmt17(cfg.detect_epsilon) << "\n";
    os << "detect.window_scale=" << fmt17(cfg.detect_window_scale) << "\n";
    os << "theorem.kind=" << cfg.theorem.kind << "\n";
    os << "theorem.rows=" << cfg.theorem.rows << "\n";
    os << "theorem.cols=" << cfg.theorem.cols << "\n";
    os << "theorem.dim=" << cfg.theorem.dim << "\n";
    os << "theorem.t=" << fmt17(cfg.theorem.t) << "\n";
    os << "theorem.segment_counts=";
    for (size_t i = 0; i < cfg.theorem.segment_counts.size(); ++i)
        os << (i ? "," : "") << cfg.theorem.segment_counts[i];
    os << "\n";
    os << "theorem.trials=" << cfg.theorem.trials << "\n";
    os << "theorem.epsilon=" << fmt17(cfg.theorem.epsilon) << "\n";
    os << "theorem.seed=" << cfg.theorem.seed << "\n";
    return os.str();
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
    uint64_t h = fnv1a64(serialize_config(cfg));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fidsim
