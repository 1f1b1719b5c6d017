#include "fidsim/theorem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <sstream>

#include "fidsim/errors.hpp"
#include "fidsim/rng.hpp"
#include "fidsim/stats.hpp"

namespace fidsim {

namespace {
using cd = std::complex<double>;
constexpr uint64_t kTheoremTag = 0x7468656f72656dULL; // stream domain tag
} // namespace

Eigen::MatrixXd lattice_h0_dense(const LatticeGeometry& geom, double delta0) {
    size_t dim = size_t{1} << geom.n;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (size_t b = 0; b < dim; ++b)
        h(b, b) = delta0 * (2.0 * std::popcount(b) - geom.n);
    return h;
}

Eigen::MatrixXd lattice_v_dense(const LatticeGeometry& geom) {
    size_t dim = size_t{1} << geom.n;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, dim);
    for (auto [i, j] : geom.links) {
        uint64_t mask = (uint64_t{1} << i) | (uint64_t{1} << j);
        for (size_t b = 0; b < dim; ++b) v(b ^ mask, b) += 1.0;
    }
    return v;
}

TheoremInstance lattice_instance(int rows, int cols, double delta0, double t,
                                 std::vector<int> segment_counts) {
    LatticeGeometry geom = build_lattice(rows, cols);
    TheoremInstance inst;
    inst.h0 = lattice_h0_dense(geom, delta0);
    inst.v = lattice_v_dense(geom);
    // all sigma_x sigma_x terms commute, so the norm is the link count
    inst.v /= static_cast<double>(geom.links.size());
    inst.t = t;
    inst.segment_counts = std::move(segment_counts);
    return inst;
}

TheoremInstance random_instance(int dim, double t,
                                std::vector<int> segment_counts,
                                uint64_t seed) {
    if (dim < 2 || dim > 64)
        throw CapabilityError("random instance dimension must be in [2, 64]");
    Eigen::MatrixXd a(dim, dim), b(dim, dim);
    uint64_t f = 0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            a(i, j) = counter_gaussian(seed, kTheoremTag, 0, f++);
            b(i, j) = counter_gaussian(seed, kTheoremTag, 1, f++);
        }
    TheoremInstance inst;
    inst.h0 = 0.5 * (a + a.transpose());
    inst.v = 0.5 * (b + b.transpose());
    inst.h0 /= inst.h0.operatorNorm();
    inst.v /= inst.v.operatorNorm();
    inst.t = t;
    inst.segment_counts = std::move(segment_counts);
    return inst;
}

double theorem_noise(uint64_t seed, uint64_t trial, uint64_t segment) {
    return counter_symmetric(seed, trial ^ kTheoremTag, segment, 0);
}

namespace {

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& q = es.eigenvectors();
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i)
        ph(i) = std::polar(1.0, -es.eigenvalues()(i) * dt);
    return q * ph.asDiagonal() * q.transpose();
}

} // namespace

Eigen::MatrixXcd product_unitary(const TheoremInstance& inst, double tau,
                                 uint64_t seed, uint64_t trial) {
    if (tau <= 0.0) throw InputError("tau must be positive");
    double ratio = inst.t / tau;
    int n = static_cast<int>(std::round(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw InputError("t/tau must round to an integer N >= 1");
    Eigen::Index dim = inst.h0.rows();
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 0; k < n; ++k) {
        double xi = theorem_noise(seed, trial, k);
        Eigen::MatrixXd h = inst.h0 + xi * inst.v;
        u = hermitian_exp(h, tau) * u; // earliest factor rightmost
    }
    return u;
}

double op_norm_svd(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double op_norm_power(const Eigen::MatrixXcd& m, int iters, double tol) {
    Eigen::Index dim = m.cols();
    Eigen::VectorXcd x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        // fixed deterministic start with all components populated
        x(i) = cd(to_unit(mix64(i + 1)) + 0.5, to_unit(mix64(i + 101)) - 0.5);
    }
    x.normalize();
    double prev = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXcd y = m.adjoint() * (m * x);
        double lam = y.norm();
        if (lam == 0.0) return 0.0;
        x = y / lam;
        double cur = std::sqrt(lam);
        if (std::abs(cur - prev) < tol * std::max(1.0, cur)) return cur;
        prev = cur;
    }
    return prev;
}

ConvergenceReport convergence_scan(const TheoremInstance& inst, int trials,
                                   double epsilon, uint64_t seed,
                                   ThreadPool& pool) {
    if (trials < 20) throw InputError("convergence scan needs >= 20 trials");
    if (inst.segment_counts.empty())
        throw InputError("instance has no segment counts");

    Eigen::MatrixXcd target = hermitian_exp(inst.h0, inst.t);
    ConvergenceReport rep;
    rep.epsilon = epsilon;
    rep.trials = trials;

    std::vector<double> log_n, log_med;
    for (int n : inst.segment_counts) {
        if (n < 1) throw InputError("segment count must be >= 1");
        double tau = inst.t / n;
        std::vector<double> devs(trials);
        pool.parallel_for(trials, [&](int trial) {
            Eigen::MatrixXcd u = product_unitary(inst, tau, seed, trial);
            devs[trial] = op_norm_svd(u - target);
        });
        ConvergenceRow row;
        row.tau = tau;
        row.n_segments = n;
        row.median_dev = median(devs);
        int exceed = 0;
        for (double d : devs)
            if (d >= epsilon) exceed++;
        row.p_hat = static_cast<double>(exceed) / trials;
        WilsonInterval ci = wilson(exceed, trials);
        row.ci_lo = ci.lo;
        row.ci_hi = ci.hi;
        rep.rows.push_back(row);
        if (row.median_dev > 0.0) {
            log_n.push_back(static_cast<double>(n));
            log_med.push_back(row.median_dev);
        }
    }
    if (log_n.size() >= 2) {
        LinearFit f = fit_loglog(log_n, log_med);
        rep.fitted_exponent = f.slope;
        rep.exponent_r2 = f.r2;
    }
    return rep;
}

SurrogateComparison gaussian_surrogate(const TheoremInstance& inst, double tau,
                                       int trials, uint64_t seed,
                                       ThreadPool& pool) {
    double ratio = inst.t / tau;
    int n = static_cast<int>(std::round(ratio));
    if (n < 1) throw InputError("tau larger than horizon");
    double sigma = std::sqrt(inst.sigma2);

    Eigen::Index dim = inst.h0.rows();
    Eigen::VectorXcd probe = Eigen::VectorXcd::Constant(dim, 1.0);
    probe.normalize();

    std::vector<double> elem_u(trials), elem_s(trials);
    std::vector<double> fid_u(trials), fid_s(trials);
    pool.parallel_for(trials, [&](int trial) {
        Eigen::MatrixXcd u = product_unitary(inst, tau, seed, trial);
        double eta = sigma * counter_gaussian(seed, trial ^ kTheoremTag,
                                              uint64_t{1} << 40, 1);
        Eigen::MatrixXd hs = inst.h0 + (eta / std::sqrt(double(n))) * inst.v;
        Eigen::MatrixXcd us = hermitian_exp(hs, inst.t);
        elem_u[trial] = u(0, 0).real();
        elem_s[trial] = us(0, 0).real();
        fid_u[trial] = std::norm(probe.dot(u * probe));
        fid_s[trial] = std::norm(probe.dot(us * probe));
    });

    SurrogateComparison cmp;
    cmp.ks_element = ks_statistic(elem_u, elem_s);
    cmp.ks_fidelity = ks_statistic(fid_u, fid_s);
    return cmp;
}

Eigen::MatrixXcd averaged_perturbation(const Eigen::MatrixXd& h0,
                                       const Eigen::MatrixXd& v, double tau) {
    if (tau < 0.0) throw InputError("tau must be non-negative");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
    const auto& q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    Eigen::MatrixXcd w = (q.transpose() * v * q).cast<cd>();
    if (tau > 0.0) {
        for (Eigen::Index a = 0; a < w.rows(); ++a)
            for (Eigen::Index b = 0; b < w.cols(); ++b) {
                double om = lam(a) - lam(b);
                if (std::abs(om) * tau > 1e-12) {
                    cd factor = (std::polar(1.0, om * tau) - cd(1.0, 0.0)) /
                                cd(0.0, om * tau);
                    w(a, b) *= factor;
                }
            }
    }
    Eigen::MatrixXcd out = q.cast<cd>() * w * q.transpose().cast<cd>();
    return 0.5 * (out + out.adjoint());
}

Eigen::MatrixXcd zeno_projection(const Eigen::MatrixXd& h0,
                                 const Eigen::MatrixXd& v, double tol,
                                 double ambiguity) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h0);
    const auto& q = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    Eigen::Index dim = lam.size();

    // eigenvalues come sorted; group by adjacent gaps
    std::vector<int> cluster(dim, 0);
    for (Eigen::Index i = 1; i < dim; ++i) {
        double gap = lam(i) - lam(i - 1);
        if (gap <= tol) {
            cluster[i] = cluster[i - 1];
        } else if (gap < ambiguity * tol) {
            std::ostringstream os;
            os << "ambiguous eigenvalue clustering: gap " << gap
               << " between " << lam(i - 1) << " and " << lam(i)
               << " lies inside (" << tol << ", " << ambiguity * tol << ")";
            throw NumericalError(os.str());
        } else {
            cluster[i] = cluster[i - 1] + 1;
        }
    }

    Eigen::MatrixXd w = q.transpose() * v * q;
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b)
            if (cluster[a] != cluster[b]) w(a, b) = 0.0;
    Eigen::MatrixXd out = q * w * q.transpose();
    return (0.5 * (out + out.transpose())).cast<cd>();
}

} // namespace fidsim
