#pragma once

#include <Eigen/Dense>
#include <optional>

#include "vchain/bath.hpp"
#include "vchain/system_model.hpp"
#include "vchain/timeseries.hpp"

namespace vchain {

// Precomputed memory-kernel data. Instead of materializing every X(-tau)
// matrix we store the eigendecomposition of h0 together with cumulative
// gap-resolved integrals
//   F_s(gap, t) = int_0^t G_s(tau) exp(-i gap tau) dtau,
// from which the convolved operators C_s(t) = sum_i int_0^t G_s X_i(-tau) dtau
// follow by a Hadamard product in the eigenbasis. This keeps the per-step
// cost independent of the tau-grid length.
struct KernelCache {
    Eigen::VectorXd evals;                 // eigenvalues of h0
    Matrix V;                              // eigenvectors (columns)
    Matrix gap;                            // gap(a,b) = evals[a] - evals[b] (real)
    std::vector<Matrix> x_plus_bare;       // per site, X summed over excited levels
    std::vector<Matrix> x_minus_bare;
    std::vector<Matrix> x_plus_eigen;      // per site, V^dag X V
    std::vector<Matrix> x_minus_eigen;
    // cum_plus[t_idx], cum_minus[t_idx]: dim x dim tables of F_s(gap_ab, t)
    std::vector<Matrix> cum_plus;
    std::vector<Matrix> cum_minus;
    std::vector<Matrix> lowering;          // radiative Lindblad lowering operators
    const CorrelationTables* tables = nullptr;
    double dtau = 0.0;
    std::size_t cutoff_index = 0;          // memory cutoff in tau-grid steps
    double obar2 = 0.0;                    // (B * Omega)^2
    bool site_diagonal = true;

    // site-summed back-evolved operator X_s^[site](-tau) for tests/inspection
    Matrix x_minus_tau(std::size_t site, bool plus_sign, double tau) const;
    // gap table F_s(t) interpolated at integration time t (clamped at cutoff)
    Matrix kernel_table(bool plus_sign, double t) const;
    // convolved operator C_s^[site](t) = int_0^min(t,cutoff) G_s X(-tau) dtau
    Matrix convolved(std::size_t site, bool plus_sign, double t) const;
    double cutoff_time() const { return dtau * static_cast<double>(cutoff_index); }
};

KernelCache precompute_kernel(const SystemModel& model, const CorrelationTables& tables,
                              bool site_diagonal_bath = true);

// Right-hand side of the master equation at integration time t.
Matrix liouvillian_apply(double t, const Matrix& rho, const KernelCache& cache,
                         const SystemModel& model);

struct EvolveOptions {
    double dt = 0.01;               // ps
    std::size_t sample_every = 100; // steps between samples
    bool keep_rho = false;
    double trace_tol = 1e-8;
    double herm_tol = 1e-10;
};

TimeSeries evolve(const SystemModel& model, const KernelCache& cache, const Matrix& rho0,
                  double t_end, const EvolveOptions& opts);

struct SteadyResult {
    bool reached = false;
    double t_reached = 0.0;
    std::map<std::string, double> values;  // trailing-window means
};

SteadyResult find_steady_state(const TimeSeries& series, double window, double tol);

} // namespace vchain
