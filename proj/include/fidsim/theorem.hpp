#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fidsim/lattice.hpp"
#include "fidsim/threadpool.hpp"

namespace fidsim {

// Instances are real symmetric (the lattice model is, and random instances
// are drawn that way); factor exponentials then use the real eigensolver.
struct TheoremInstance {
    Eigen::MatrixXd h0;
    Eigen::MatrixXd v;
    double t = 2.0;
    std::vector<int> segment_counts; // N values; switching period tau = t/N
    double sigma2 = 1.0 / 12.0;      // variance of the scalar noise
};

// H0 = delta0 sum_j sigma_z(j) in the bit basis (diagonal)
Eigen::MatrixXd lattice_h0_dense(const LatticeGeometry& geom, double delta0);
// sum over links of sigma_x(i) sigma_x(j)
Eigen::MatrixXd lattice_v_dense(const LatticeGeometry& geom);

// lattice instance with V normalized to unit operator norm
TheoremInstance lattice_instance(int rows, int cols, double delta0, double t,
                                 std::vector<int> segment_counts);

// random real-symmetric H0 and V (V normalized to unit operator norm)
TheoremInstance random_instance(int dim, double t,
                                std::vector<int> segment_counts,
                                uint64_t seed);

// scalar segment noise, uniform on [-1/2, 1/2): pure function of counters
double theorem_noise(uint64_t seed, uint64_t trial, uint64_t segment);

// U_N(t) = prod_k exp[-i (H0 + xi_k V) tau], earliest factor rightmost;
// N = round(t / tau) must be >= 1
Eigen::MatrixXcd product_unitary(const TheoremInstance& inst, double tau,
                                 uint64_t seed, uint64_t trial = 0);

double op_norm_svd(const Eigen::MatrixXcd& m);
double op_norm_power(const Eigen::MatrixXcd& m, int iters = 300,
                     double tol = 1e-10);

struct ConvergenceRow {
    double tau = 0.0;
    int n_segments = 0;
    double median_dev = 0.0;
    double p_hat = 0.0; // empirical P(dev >= epsilon)
    double ci_lo = 0.0;
    double ci_hi = 1.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double fitted_exponent = 0.0; // slope of log median_dev vs log N
    double exponent_r2 = 0.0;
    double epsilon = 0.0;
    int trials = 0;
};

ConvergenceReport convergence_scan(const TheoremInstance& inst, int trials,
                                   double epsilon, uint64_t seed,
                                   ThreadPool& pool);

struct SurrogateComparison {
    double ks_element = 0.0;  // KS over Re U(0,0)
    double ks_fidelity = 0.0; // KS over |<probe|U|probe>|^2
};

// Empirical distribution of U_N against exp[-i (H0 + eta V / sqrt(N)) t]
// with eta Gaussian(0, sigma2)
SurrogateComparison gaussian_surrogate(const TheoremInstance& inst, double tau,
                                       int trials, uint64_t seed,
                                       ThreadPool& pool);

// Vbar(tau) = (1/tau) int_0^tau e^{iH0 t} V e^{-iH0 t} dt, in the H0 eigenbasis
Eigen::MatrixXcd averaged_perturbation(const Eigen::MatrixXd& h0,
                                       const Eigen::MatrixXd& v, double tau);

// V_Z = sum_k P_k V P_k over H0 eigenprojections; eigenvalues grouped with
// absolute tolerance `tol`; gaps inside (tol, ambiguity*tol) are rejected
Eigen::MatrixXcd zeno_projection(const Eigen::MatrixXd& h0,
                                 const Eigen::MatrixXd& v, double tol = 1e-9,
                                 double ambiguity = 1e3);

} // namespace fidsim
