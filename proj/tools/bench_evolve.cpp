// Timing and noise calibration probe: matvec cost, per-realization cost,
// and the coefficient of variation of E at detection-relevant points
// (sets the realization budgets in the acceptance suite).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "fidsim/hamiltonian.hpp"
#include "fidsim/lattice.hpp"
#include "fidsim/noise.hpp"
#include "fidsim/observables.hpp"
#include "fidsim/propagator.hpp"
#include "fidsim/stats.hpp"
#include "fidsim/threadpool.hpp"

using namespace fidsim;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void bench_matvec(int rows, int cols) {
    LatticeGeometry geom = build_lattice(rows, cols);
    ModelParams params;
    params.delta = 0.3;
    params.bigJ = 5e-3;
    NoiseSchedule sched = sample_schedule(geom, params, 1.0, 1.0, 7, 0);
    CompiledHamiltonian h =
        compile_hamiltonian(segment_hamiltonian(geom, params.delta0, sched.segments[0]));
    size_t dim = size_t(1) << geom.n;
    StateVector x(dim), y(dim);
    for (size_t i = 0; i < dim; ++i) x[i] = {1.0 / std::sqrt(double(dim)), 0.0};
    const int reps = 2000;
    double t0 = now_ms();
    for (int r = 0; r < reps; ++r) {
        apply_compiled(h, x, y);
        std::swap(x, y);
    }
    double dt = now_ms() - t0;
    std::printf("matvec n=%d: %.3f us/apply (%d reps)\n", geom.n,
                1e3 * dt / reps, reps);
}

void bench_realization(double horizon, double tau, double delta, double bigJ,
                       const std::string& bits, int rows, int cols, int reps) {
    LatticeGeometry geom = build_lattice(rows, cols);
    ModelParams params;
    params.delta = delta;
    params.bigJ = bigJ;
    ProductState st = make_product_state(geom, bits);
    StateVector psi0 = initial_state_vector(geom, st);
    PropagatorMethod method;
    PropagationStats stats;
    double t0 = now_ms();
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
        NoiseSchedule sched = sample_schedule(geom, params, tau, horizon, 3, r);
        StateVector psi = psi0;
        for (const auto& seg : sched.segments)
            psi = evolve_segment(segment_hamiltonian(geom, params.delta0, seg),
                                 seg.duration, psi, method, &stats);
        std::complex<double> ov{0.0, 0.0};
        for (size_t i = 0; i < psi.size(); ++i)
            ov += std::conj(psi0[i]) * psi[i];
        acc += std::norm(ov);
    }
    double dt = now_ms() - t0;
    std::printf("evolve n=%d t=%g tau=%g delta=%g: %.2f ms/realization "
                "(%ld matvecs, mean F=%.6f)\n",
                geom.n, horizon, tau, delta, dt / reps, stats.matvecs / reps,
                acc / reps);
}

void bench_cv(double horizon, double tau, double delta, double bigJ,
              const std::string& bits, int rows, int cols, int reps) {
    LatticeGeometry geom = build_lattice(rows, cols);
    EnsembleTask task;
    task.geom = &geom;
    task.params.delta = delta;
    task.params.bigJ = bigJ;
    task.state = make_product_state(geom, bits);
    task.horizon = horizon;
    task.tau = tau;
    task.seed = 11;
    task.realizations = reps;
    ThreadPool pool(1);
    double t0 = now_ms();
    EnsemblePoint p = ensemble_error_point(task, pool);
    double dt = now_ms() - t0;
    double cv = p.e_stderr * std::sqrt(double(reps)) / p.e_mean;
    std::printf("cv n=%d t=%g tau=%g delta=%g R=%d: E=%.6e se=%.2e cv=%.3f "
                "(%.1f ms total, %.2f ms/real)\n",
                geom.n, horizon, tau, delta, reps, p.e_mean, p.e_stderr, cv, dt,
                dt / reps);
}

} // namespace

int main(int argc, char** argv) {
    std::string what = argc > 1 ? argv[1] : "quick";
    const std::string w10 = "1010110100";
    if (what == "matvec" || what == "quick") {
        bench_matvec(2, 5);
        if (what == "matvec") bench_matvec(2, 6);
    }
    if (what == "evolve" || what == "quick") {
        bench_realization(25, 0.5, 0.3, 5e-3, w10, 2, 5, what == "quick" ? 5 : 20);
        bench_realization(25, 5.0, 0.3, 5e-3, w10, 2, 5, what == "quick" ? 5 : 20);
        bench_realization(25, 25.0, 0.3, 5e-3, w10, 2, 5, what == "quick" ? 5 : 20);
    }
    if (what == "cv") {
        int reps = argc > 2 ? std::atoi(argv[2]) : 100;
        // detection scan neighborhoods and the saturated static point
        bench_cv(25, 25.0 / 5, 0.3, 5e-3, w10, 2, 5, reps);
        bench_cv(25, 40.0, 0.3, 5e-3, w10, 2, 5, reps);
        bench_cv(50, 50.0 / 4, 0.1, 5e-3, w10, 2, 5, reps);
        bench_cv(50, 50.0 / 6, 0.2, 5e-3, w10, 2, 5, reps);
        bench_cv(50, 50.0 / 8, 0.3, 5e-3, w10, 2, 5, reps);
        bench_cv(50, 50.0 / 11, 0.5, 5e-3, w10, 2, 5, reps);
    }
    if (what == "cv-time") {
        int reps = argc > 2 ? std::atoi(argv[2]) : 100;
        bench_cv(25, 0.5, 0.3, 5e-3, w10, 2, 5, reps);
        bench_cv(25, 2.0, 0.3, 5e-3, w10, 2, 5, reps);
        bench_cv(25, 10.0, 0.3, 5e-3, w10, 2, 5, reps);
    }
    return 0;
}
