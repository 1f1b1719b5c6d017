#include "fidsim/propagator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

#include "fidsim/errors.hpp"

namespace fidsim {

namespace {

using cd = std::complex<double>;

double norm_of(const StateVector& v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return std::sqrt(s);
}

cd dot(const StateVector& a, const StateVector& b) {
    cd s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// exp(-i dt T) e1 for the (k+1)x(k+1) tridiagonal T
void expm_tridiag(const std::vector<double>& alpha,
                  const std::vector<double>& beta, int k1, double dt,
                  std::vector<cd>& u) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k1, k1);
    for (int i = 0; i < k1; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < k1; ++i) {
        t(i, i + 1) = beta[i + 1];
        t(i + 1, i) = beta[i + 1];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const auto& q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    u.assign(k1, cd{0.0, 0.0});
    for (int j = 0; j < k1; ++j) {
        cd phase = std::polar(q(0, j), -lam(j) * dt);
        for (int i = 0; i < k1; ++i) u[i] += phase * q(i, j);
    }
}

struct LanczosWorkspace {
    std::vector<StateVector> v;
    StateVector w;
    std::vector<double> alpha, beta;
    std::vector<cd> u;
};

// psi <- exp(-i dt h) psi via Lanczos; returns residual estimate
double lanczos_step(const CompiledHamiltonian& h, double dt, StateVector& psi,
                    const PropagatorMethod& method, LanczosWorkspace& ws,
                    PropagationStats* stats) {
    int m = std::max(4, method.krylov_dim);
    size_t dim = psi.size();
    double beta0 = norm_of(psi);
    if (beta0 == 0.0) throw NumericalError("zero state in Krylov propagation");

    if (ws.v.size() < static_cast<size_t>(m + 1)) ws.v.resize(m + 1);
    ws.alpha.assign(m, 0.0);
    ws.beta.assign(m + 1, 0.0);

    ws.v[0].resize(dim);
    for (size_t i = 0; i < dim; ++i) ws.v[0][i] = psi[i] / beta0;

    double residual = 1.0;
    int k = 0;
    bool breakdown = false;
    for (; k < m; ++k) {
        apply_compiled(h, ws.v[k], ws.w);
        if (stats) stats->matvecs++;
        if (k > 0) {
            double b = ws.beta[k];
            const auto& prev = ws.v[k - 1];
            for (size_t i = 0; i < dim; ++i) ws.w[i] -= b * prev[i];
        }
        double a = dot(ws.v[k], ws.w).real();
        ws.alpha[k] = a;
        {
            const auto& cur = ws.v[k];
            for (size_t i = 0; i < dim; ++i) ws.w[i] -= a * cur[i];
        }
        double b1 = norm_of(ws.w);
        ws.beta[k + 1] = b1;

        if (b1 < 1e-13 * std::max(1.0, h.norm_bound)) {
            // happy breakdown: Krylov space is invariant, result exact
            expm_tridiag(ws.alpha, ws.beta, k + 1, dt, ws.u);
            residual = 0.0;
            breakdown = true;
            ++k;
            break;
        }
        if (k >= 3 || k == m - 1) {
            expm_tridiag(ws.alpha, ws.beta, k + 1, dt, ws.u);
            residual = b1 * std::abs(ws.u[k]);
            if (residual < method.tolerance) {
                ++k;
                break;
            }
        }
        ws.v[k + 1].resize(dim);
        for (size_t i = 0; i < dim; ++i) ws.v[k + 1][i] = ws.w[i] / b1;
    }

    if (!breakdown && residual >= method.tolerance) {
        // krylov_dim exhausted: recursively halve the step
        if (dt < 1e-8)
            throw NumericalError("Krylov propagation failed to converge, residual " +
                                 std::to_string(residual));
        double half = dt / 2.0;
        double r1 = lanczos_step(h, half, psi, method, ws, stats);
        double r2 = lanczos_step(h, dt - half, psi, method, ws, stats);
        return r1 + r2;
    }

    for (size_t i = 0; i < dim; ++i) {
        cd s = 0.0;
        for (int j = 0; j < k; ++j) s += ws.u[j] * ws.v[j][i];
        psi[i] = beta0 * s;
    }
    return residual;
}

void renormalize(StateVector& psi, PropagationStats* stats) {
    double nrm = norm_of(psi);
    if (nrm <= 0.0) throw NumericalError("state norm collapsed");
    double defect = std::abs(nrm - 1.0);
    if (stats && defect > stats->max_norm_defect)
        stats->max_norm_defect = defect;
    for (auto& a : psi) a /= nrm;
}

void evolve_inplace(const CompiledHamiltonian& ch,
                    const SegmentHamiltonian& h, double dt, StateVector& psi,
                    const PropagatorMethod& method, LanczosWorkspace& ws,
                    PropagationStats* stats) {
    if (dt < 0.0) throw InputError("negative segment duration");
    if (dt == 0.0) return;
    if (method.kind == PropagatorKind::dense_exponential) {
        Eigen::MatrixXcd m = dense_matrix(h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(psi.data(), psi.size());
        Eigen::VectorXcd y = es.eigenvectors().adjoint() * v;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            y(i) *= std::polar(1.0, -es.eigenvalues()(i) * dt);
        v = es.eigenvectors() * y;
        Eigen::Map<Eigen::VectorXcd>(psi.data(), psi.size()) = v;
    } else {
        double sub = method.substep > 0.0 ? method.substep : 0.5;
        int nsub = std::max(1, static_cast<int>(std::ceil(dt / sub - 1e-12)));
        double step = dt / nsub;
        for (int s = 0; s < nsub; ++s)
            lanczos_step(ch, step, psi, method, ws, stats);
    }
    if (stats) stats->segments++;
}

} // namespace

StateVector evolve_segment(const SegmentHamiltonian& h, double dt,
                           const StateVector& psi, const PropagatorMethod& method,
                           PropagationStats* stats) {
    StateVector out = psi;
    LanczosWorkspace ws;
    auto ch = compile_hamiltonian(h);
    PropagationStats local;
    evolve_inplace(ch, h, dt, out, method, ws, &local);
    renormalize(out, &local);
    if (stats) {
        stats->max_norm_defect =
            std::max(stats->max_norm_defect, local.max_norm_defect);
        stats->matvecs += local.matvecs;
        stats->segments += local.segments;
    }
    return out;
}

EvolutionResult evolve_piecewise(const LatticeGeometry& geom, double delta0,
                                 const NoiseSchedule& schedule,
                                 const StateVector& psi0,
                                 const std::vector<double>& sample_times,
                                 const PropagatorMethod& method) {
    const double tol = 1e-9 * std::max(1.0, schedule.horizon);
    for (size_t i = 0; i < sample_times.size(); ++i) {
        if (i > 0 && sample_times[i] < sample_times[i - 1])
            throw InputError("sample times must be sorted");
        if (sample_times[i] < -tol || sample_times[i] > schedule.horizon + tol)
            throw InputError("sample time outside [0, horizon]");
    }

    EvolutionResult res;
    res.psi_final = psi0;
    LanczosWorkspace ws;
    StateVector& psi = res.psi_final;

    size_t next_sample = 0;
    auto record_samples_at = [&](double tnow) {
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] <= tnow + tol) {
            double f = std::norm(dot(psi0, psi));
            res.fidelity_samples.emplace_back(sample_times[next_sample], f);
            ++next_sample;
        }
    };

    double tnow = 0.0;
    record_samples_at(tnow);

    for (const auto& seg : schedule.segments) {
        SegmentHamiltonian h = segment_hamiltonian(geom, delta0, seg);
        auto ch = compile_hamiltonian(h);
        double remaining = seg.duration;
        // split at sample times inside this segment
        while (next_sample < sample_times.size() &&
               sample_times[next_sample] < tnow + remaining - tol) {
            double dt = sample_times[next_sample] - tnow;
            if (dt > tol) {
                evolve_inplace(ch, h, dt, psi, method, ws, &res.stats);
                renormalize(psi, &res.stats);
                tnow += dt;
                remaining -= dt;
            }
            record_samples_at(tnow);
        }
        if (remaining > 0.0) {
            evolve_inplace(ch, h, remaining, psi, method, ws, &res.stats);
            renormalize(psi, &res.stats);
            tnow += remaining;
        }
        record_samples_at(tnow);
    }
    record_samples_at(schedule.horizon + tol);
    return res;
}

} // namespace fidsim
