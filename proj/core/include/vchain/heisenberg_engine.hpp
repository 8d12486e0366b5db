#pragma once

#include <Eigen/Dense>

#include "vchain/bath.hpp"
#include "vchain/system_model.hpp"
#include "vchain/timeseries.hpp"

namespace vchain {

// Correlation-expansion state: bare electronic expectations plus one
// phonon-assisted amplitude pair per k-node. Single emitter only.
struct HeisenbergState {
    Eigen::Matrix3cd sigma;                    // <sigma_mn>
    std::vector<Eigen::Matrix3cd> sigma_r;     // per node, <sigma_mn r_k>
    std::vector<Eigen::Matrix3cd> sigma_rdag;  // per node, <sigma_mn r_k^dag>
    double t = 0.0;
};

HeisenbergState initial_heisenberg_state(const Matrix& rho0, std::size_t n_k);

struct HeisenbergOptions {
    double intraband_ratio = 0.0;   // g_intra / g_inter; 0 disables
    bool ablate_sigma23 = false;    // zero every coupling into/out of sigma_23
    double horizon_cap = 200.0;     // ps; guards the method's long-time fragility
    double sum_tol = 1e-6;          // population-sum conservation tolerance
    double conj_tol = 1e-8;         // conjugation-pairing tolerance
};

HeisenbergState rhs(const HeisenbergState& state, const SystemModel& model,
                    const KGrid& kgrid, const HeisenbergOptions& options);

TimeSeries evolve_heisenberg(const SystemModel& model, const KGrid& kgrid,
                             const HeisenbergState& state0, double t_end, double dt,
                             std::size_t sample_every, const HeisenbergOptions& options);

struct Spectrum {
    std::vector<double> omega;  // 1/ps, rotating-frame
    std::vector<double> alpha;  // arbitrary units
};

struct SpectrumConfig {
    double t_end = 100.0;        // ps
    double dt = 0.002;           // ps
    double epsilon = 1e-3;       // coherence seed amplitude
    double omega_max = 6.0;      // 1/ps
    std::size_t n_omega = 1201;  // symmetric grid including 0
};

// Linear absorption of the V emitter: evolve a weak coherence seed at zero
// drive and Fourier-transform sigma_12 + sigma_13 with a Hann window.
Spectrum absorption_spectrum(const SystemModel& model, const KGrid& kgrid,
                             const SpectrumConfig& config);

// Independent-boson reference lineshape from the correlation tables:
// alpha(omega) ~ Re int_0^T dt e^{i omega t} exp(phi(t) - phi(0)), Hann-windowed.
Spectrum ibm_reference_spectrum(const CorrelationTables& tables,
                                const std::vector<double>& omega_grid);

// Indices of strict local maxima (interior points above both neighbors).
std::vector<std::size_t> local_maxima(const std::vector<double>& y);

} // namespace vchain
