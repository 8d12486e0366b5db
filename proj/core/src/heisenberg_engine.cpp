#include "vchain/heisenberg_engine.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vchain/analysis.hpp"

namespace vchain {

namespace {
const std::complex<double> I{0.0, 1.0};

void ablate(Eigen::Matrix3cd& m) {
    m(1, 2) = 0.0;
    m(2, 1) = 0.0;
}
} // namespace

HeisenbergState initial_heisenberg_state(const Matrix& rho0, std::size_t n_k) {
    if (rho0.rows() != 3 || rho0.cols() != 3)
        throw ConfigError("Heisenberg engine covers the single emitter only");
    HeisenbergState s;
    // <sigma_mn> = tr(rho sigma_mn) = rho_nm; factorized start, no phonon amplitudes
    s.sigma = rho0.transpose();
    s.sigma_r.assign(n_k, Eigen::Matrix3cd::Zero());
    s.sigma_rdag.assign(n_k, Eigen::Matrix3cd::Zero());
    return s;
}

HeisenbergState rhs(const HeisenbergState& state, const SystemModel& model,
                    const KGrid& kgrid, const HeisenbergOptions& options) {
    const std::size_t n_k = kgrid.nodes.size();
    if (state.sigma_r.size() != n_k || state.sigma_rdag.size() != n_k)
        throw ConfigError("state/k-grid dimension mismatch");
    if (model.scheme.dim != 3)
        throw ConfigError("Heisenberg engine covers the single emitter only");

    Eigen::Matrix3cd h = model.h0;
    Eigen::Matrix3cd K = Eigen::Matrix3cd::Zero();
    K(1, 1) = 1.0;
    K(2, 2) = 1.0;
    if (options.intraband_ratio != 0.0) {
        K(1, 2) = options.intraband_ratio;
        K(2, 1) = options.intraband_ratio;
    }

    Eigen::Matrix3cd S = state.sigma;
    if (options.ablate_sigma23) ablate(S);

    HeisenbergState d;
    d.sigma_r.resize(n_k);
    d.sigma_rdag.resize(n_k);
    d.sigma = I * (h * S - S * h);
    const Eigen::Matrix3cd KS = K * S;
    const Eigen::Matrix3cd SK = S * K;
    for (std::size_t j = 0; j < n_k; ++j) {
        Eigen::Matrix3cd sr = state.sigma_r[j];
        Eigen::Matrix3cd srd = state.sigma_rdag[j];
        if (options.ablate_sigma23) {
            ablate(sr);
            ablate(srd);
        }
        const double g = kgrid.effective_couplings[j];
        const double w = kgrid.frequencies[j];
        const double nbar = kgrid.thermal[j];
        const Eigen::Matrix3cd sum = sr + srd;
        d.sigma += I * g * (K * sum - sum * K);
        d.sigma_r[j] = I * (h * sr - sr * h) - I * w * sr + I * g * (nbar * KS - (nbar + 1.0) * SK);
        d.sigma_rdag[j] =
            I * (h * srd - srd * h) + I * w * srd + I * g * ((nbar + 1.0) * KS - nbar * SK);
        if (options.ablate_sigma23) {
            ablate(d.sigma_r[j]);
            ablate(d.sigma_rdag[j]);
        }
    }
    if (options.ablate_sigma23) ablate(d.sigma);
    return d;
}

namespace {

Matrix sigma_to_rho(const Eigen::Matrix3cd& sigma) {
    return sigma.transpose();
}

void check_heisenberg_invariants(const Eigen::Matrix3cd& sigma, double t,
                                 const HeisenbergOptions& opts, double& worst_sum,
                                 double& worst_conj) {
    const double sum_dev = std::abs(sigma(0, 0).real() + sigma(1, 1).real() +
                                    sigma(2, 2).real() - 1.0);
    double conj = 0.0;
    for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n)
            conj = std::max(conj, std::abs(sigma(m, n) - std::conj(sigma(n, m))));
    worst_sum = std::max(worst_sum, sum_dev);
    worst_conj = std::max(worst_conj, conj);
    if (!std::isfinite(sum_dev) || sum_dev > opts.sum_tol || conj > opts.conj_tol) {
        std::ostringstream msg;
        msg << "Heisenberg invariant violation at t=" << t << " ps: |sum-1|=" << sum_dev
            << ", conjugation=" << conj;
        throw NumericalError(msg.str());
    }
}

void axpy(HeisenbergState& y, double a, const HeisenbergState& x) {
    y.sigma += a * x.sigma;
    for (std::size_t j = 0; j < y.sigma_r.size(); ++j) {
        y.sigma_r[j] += a * x.sigma_r[j];
        y.sigma_rdag[j] += a * x.sigma_rdag[j];
    }
}

HeisenbergState blend(const HeisenbergState& s, double a, const HeisenbergState& k) {
    HeisenbergState out = s;
    axpy(out, a, k);
    return out;
}

} // namespace

TimeSeries evolve_heisenberg(const SystemModel& model, const KGrid& kgrid,
                             const HeisenbergState& state0, double t_end, double dt,
                             std::size_t sample_every, const HeisenbergOptions& options) {
    if (dt <= 0.0 || t_end <= 0.0) throw ConfigError("dt and t_end must be positive");
    if (t_end > options.horizon_cap)
        throw ConfigError("Heisenberg horizon exceeds the configured cap");
    const double w_max = kgrid.frequencies.empty() ? 0.0 : kgrid.frequencies.back();
    if (w_max > 0.0 && dt > 0.1 / w_max)
        throw ConfigError("dt does not resolve the highest phonon frequency");

    TimeSeries series;
    for (const auto& name : observable_channel_names(model.scheme)) series.add_channel(name);

    double worst_sum = 0.0, worst_conj = 0.0;
    auto sample = [&](double t, const HeisenbergState& s) {
        check_heisenberg_invariants(s.sigma, t, options, worst_sum, worst_conj);
        series.push_sample(t, extract_observables(sigma_to_rho(s.sigma), model.scheme));
    };

    HeisenbergState s = state0;
    sample(0.0, s);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / dt));
    const std::size_t per = std::max<std::size_t>(1, sample_every);
    for (std::size_t step = 0; step < n_steps; ++step) {
        const HeisenbergState k1 = rhs(s, model, kgrid, options);
        const HeisenbergState k2 = rhs(blend(s, 0.5 * dt, k1), model, kgrid, options);
        const HeisenbergState k3 = rhs(blend(s, 0.5 * dt, k2), model, kgrid, options);
        const HeisenbergState k4 = rhs(blend(s, dt, k3), model, kgrid, options);
        axpy(s, dt / 6.0, k1);
        axpy(s, dt / 3.0, k2);
        axpy(s, dt / 3.0, k3);
        axpy(s, dt / 6.0, k4);
        if ((step + 1) % per == 0) sample(static_cast<double>(step + 1) * dt, s);
    }

    series.metadata["worst_population_sum_deviation"] = format_metadata(worst_sum);
    series.metadata["worst_conjugation_deviation"] = format_metadata(worst_conj);
    series.metadata["engine"] = "heisenberg";
    return series;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
        if (y[i] > y[i - 1] && y[i] > y[i + 1]) idx.push_back(i);
    return idx;
}

Spectrum absorption_spectrum(const SystemModel& model, const KGrid& kgrid,
                             const SpectrumConfig& config) {
    if (model.drive.rabi != 0.0)
        throw ConfigError("absorption spectrum requires a zero-drive model");
    // weak coherence seed on both optical transitions, populations at ground
    Matrix rho0 = Matrix::Zero(3, 3);
    rho0(0, 0) = 1.0;
    rho0(0, 1) = rho0(1, 0) = config.epsilon;
    rho0(0, 2) = rho0(2, 0) = config.epsilon;

    HeisenbergOptions opts;
    opts.horizon_cap = std::max(200.0, config.t_end);
    opts.conj_tol = 1e-6;
    HeisenbergState s = initial_heisenberg_state(rho0, kgrid.nodes.size());

    const std::size_t n_steps = static_cast<std::size_t>(std::llround(config.t_end / config.dt));
    std::vector<std::complex<double>> signal;
    signal.reserve(n_steps + 1);
    signal.push_back(s.sigma(0, 1) + s.sigma(0, 2));
    for (std::size_t step = 0; step < n_steps; ++step) {
        const HeisenbergState k1 = rhs(s, model, kgrid, opts);
        const HeisenbergState k2 = rhs(blend(s, 0.5 * config.dt, k1), model, kgrid, opts);
        const HeisenbergState k3 = rhs(blend(s, 0.5 * config.dt, k2), model, kgrid, opts);
        const HeisenbergState k4 = rhs(blend(s, config.dt, k3), model, kgrid, opts);
        axpy(s, config.dt / 6.0, k1);
        axpy(s, config.dt / 3.0, k2);
        axpy(s, config.dt / 3.0, k3);
        axpy(s, config.dt / 6.0, k4);
        signal.push_back(s.sigma(0, 1) + s.sigma(0, 2));
        if (!std::isfinite(std::abs(signal.back())))
            throw NumericalError("absorption evolution diverged");
    }

    const std::size_t n = signal.size();
    Spectrum sp;
    sp.omega.resize(config.n_omega);
    sp.alpha.resize(config.n_omega);
    for (std::size_t i = 0; i < config.n_omega; ++i) {
        const double w = -config.omega_max +
                         2.0 * config.omega_max * static_cast<double>(i) /
                             static_cast<double>(config.n_omega - 1);
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) * config.dt;
            const double hann =
                0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(n - 1)));
            acc += hann * signal[k] * std::exp(I * w * t);
        }
        sp.omega[i] = w;
        sp.alpha[i] = (acc * config.dt).imag();
    }
    return sp;
}

Spectrum ibm_reference_spectrum(const CorrelationTables& tables,
                                const std::vector<double>& omega_grid) {
    const std::size_t n = tables.tau_grid.size();
    const double phi0 = tables.phi.empty() ? 0.0 : tables.phi[0].real();
    Spectrum sp;
    sp.omega = omega_grid;
    sp.alpha.resize(omega_grid.size());
    const double dtau = tables.dtau();
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const double w = omega_grid[i];
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = tables.tau_grid[k];
            const double hann =
                0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(n - 1)));
            const double trap = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
            acc += trap * hann * std::exp(tables.phi[k] - phi0) * std::exp(I * w * t);
        }
        sp.alpha[i] = (acc * dtau).real();
    }
    return sp;
}

} // namespace vchain
