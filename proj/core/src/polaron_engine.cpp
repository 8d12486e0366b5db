#include "vchain/polaron_engine.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "vchain/analysis.hpp"

namespace vchain {

namespace {
const std::complex<double> I{0.0, 1.0};
} // namespace

KernelCache precompute_kernel(const SystemModel& model, const CorrelationTables& tables,
                              bool site_diagonal_bath) {
    const std::size_t dim = model.scheme.dim;
    if ((model.h0 - model.h0.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw NumericalError("h0 is not Hermitian");

    KernelCache cache;
    cache.site_diagonal = site_diagonal_bath;
    cache.dtau = tables.dtau();
    cache.cutoff_index = std::min(tables.memory_cutoff_index, tables.tau_grid.size() - 1);
    cache.obar2 = tables.polaron_factor * model.drive.rabi;
    cache.obar2 *= cache.obar2;
    cache.tables = &tables;

    Eigen::SelfAdjointEigenSolver<Matrix> es(model.h0);
    if (es.info() != Eigen::Success) throw NumericalError("h0 eigendecomposition failed");
    cache.evals = es.eigenvalues();
    cache.V = es.eigenvectors();

    // per site, X operators presummed over the two excited levels; the kernel
    // tables depend only on the eigenvalue gaps, so one cumulative table per
    // correlation sign serves every site
    cache.x_plus_bare.assign(model.scheme.n_sites, Matrix::Zero(dim, dim));
    cache.x_minus_bare.assign(model.scheme.n_sites, Matrix::Zero(dim, dim));
    for (const auto& x : model.x_ops) {
        cache.x_plus_bare[x.site] += x.x_plus;
        cache.x_minus_bare[x.site] += x.x_minus;
    }
    cache.x_plus_eigen.clear();
    cache.x_minus_eigen.clear();
    for (std::size_t l = 0; l < model.scheme.n_sites; ++l) {
        cache.x_plus_eigen.push_back(cache.V.adjoint() * cache.x_plus_bare[l] * cache.V);
        cache.x_minus_eigen.push_back(cache.V.adjoint() * cache.x_minus_bare[l] * cache.V);
    }

    Matrix gap(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) gap(a, b) = cache.evals[a] - cache.evals[b];
    cache.gap = gap;

    // cumulative trapezoid of G_s(tau) exp(-i gap tau) over the memory window
    auto accumulate = [&](const std::vector<std::complex<double>>& g) {
        std::vector<Matrix> cum;
        cum.reserve(cache.cutoff_index + 1);
        cum.push_back(Matrix::Zero(dim, dim));
        Matrix prev(dim, dim), cur(dim, dim);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) prev(a, b) = g[0];
        for (std::size_t i = 1; i <= cache.cutoff_index; ++i) {
            const double tau = tables.tau_grid[i];
            for (std::size_t a = 0; a < dim; ++a)
                for (std::size_t b = 0; b < dim; ++b)
                    cur(a, b) = g[i] * std::exp(-I * gap(a, b).real() * tau);
            cum.push_back(cum.back() + 0.5 * cache.dtau * (prev + cur));
            prev = cur;
        }
        return cum;
    };
    cache.cum_plus = accumulate(tables.g_plus);
    cache.cum_minus = accumulate(tables.g_minus);

    cache.lowering = radiative_dissipator(model.scheme, model.gamma_r);
    return cache;
}

Matrix KernelCache::x_minus_tau(std::size_t site, bool plus_sign, double tau) const {
    const Matrix& xe = plus_sign ? x_plus_eigen.at(site) : x_minus_eigen.at(site);
    Matrix phase(xe.rows(), xe.cols());
    for (Eigen::Index a = 0; a < xe.rows(); ++a)
        for (Eigen::Index b = 0; b < xe.cols(); ++b)
            phase(a, b) = xe(a, b) * std::exp(-I * gap(a, b).real() * tau);
    return V * phase * V.adjoint();
}

Matrix KernelCache::kernel_table(bool plus_sign, double t) const {
    const auto& cum = plus_sign ? cum_plus : cum_minus;
    const double x = t / dtau;
    if (x >= static_cast<double>(cutoff_index)) return cum[cutoff_index];
    const std::size_t i = static_cast<std::size_t>(x);
    const double w = x - static_cast<double>(i);
    if (w == 0.0) return cum[i];
    return (1.0 - w) * cum[i] + w * cum[i + 1];
}

Matrix KernelCache::convolved(std::size_t site, bool plus_sign, double t) const {
    const Matrix& xe = plus_sign ? x_plus_eigen.at(site) : x_minus_eigen.at(site);
    return V * kernel_table(plus_sign, t).cwiseProduct(xe) * V.adjoint();
}

Matrix liouvillian_apply(double t, const Matrix& rho, const KernelCache& cache,
                         const SystemModel& model) {
    const std::size_t dim = model.scheme.dim;
    if (rho.rows() != static_cast<Eigen::Index>(dim) || cache.V.rows() != rho.rows())
        throw ConfigError("state/cache/model dimension mismatch");
    if (t < 0.0) throw ConfigError("negative time in liouvillian_apply");

    Matrix d = -I * (model.h0 * rho - rho * model.h0);

    if (cache.obar2 != 0.0) {
        const Matrix fp = cache.kernel_table(true, t);
        const Matrix fm = cache.kernel_table(false, t);
        auto add_pair = [&](const Matrix& a, const Matrix& c) {
            const Matrix cr = c * rho;
            const Matrix rcd = rho * c.adjoint();
            d -= cache.obar2 * (a * cr - cr * a + rcd * a - a * rcd);
        };
        if (cache.site_diagonal) {
            for (std::size_t l = 0; l < model.scheme.n_sites; ++l) {
                add_pair(cache.x_plus_bare[l],
                         cache.V * fp.cwiseProduct(cache.x_plus_eigen[l]) * cache.V.adjoint());
                add_pair(cache.x_minus_bare[l],
                         cache.V * fm.cwiseProduct(cache.x_minus_eigen[l]) * cache.V.adjoint());
            }
        } else {
            Matrix ap = Matrix::Zero(dim, dim), am = Matrix::Zero(dim, dim);
            Matrix cp = Matrix::Zero(dim, dim), cm = Matrix::Zero(dim, dim);
            for (std::size_t l = 0; l < model.scheme.n_sites; ++l) {
                ap += cache.x_plus_bare[l];
                am += cache.x_minus_bare[l];
                cp += cache.V * fp.cwiseProduct(cache.x_plus_eigen[l]) * cache.V.adjoint();
                cm += cache.V * fm.cwiseProduct(cache.x_minus_eigen[l]) * cache.V.adjoint();
            }
            add_pair(ap, cp);
            add_pair(am, cm);
        }
    }

    if (model.gamma_r > 0.0) {
        for (const Matrix& L : cache.lowering) {
            const Matrix LdL = L.adjoint() * L;
            d += model.gamma_r * (L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL));
        }
    }
    return d;
}

namespace {

void check_invariants(const Matrix& rho, double t, const EvolveOptions& opts,
                      double& worst_trace, double& worst_herm) {
    const double tr_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    worst_trace = std::max(worst_trace, tr_dev);
    worst_herm = std::max(worst_herm, herm);
    if (!std::isfinite(tr_dev) || tr_dev > opts.trace_tol || herm > opts.herm_tol) {
        std::ostringstream msg;
        msg << "invariant violation at t=" << t << " ps: |tr-1|=" << tr_dev
            << ", hermiticity=" << herm;
        throw NumericalError(msg.str());
    }
}

} // namespace

TimeSeries evolve(const SystemModel& model, const KernelCache& cache, const Matrix& rho0,
                  double t_end, const EvolveOptions& opts) {
    if (opts.dt <= 0.0 || t_end <= 0.0) throw ConfigError("dt and t_end must be positive");
    const std::size_t dim = model.scheme.dim;
    const std::size_t sample_every = std::max<std::size_t>(1, opts.sample_every);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / opts.dt));

    TimeSeries series;
    for (const auto& name : observable_channel_names(model.scheme)) series.add_channel(name);

    double worst_trace = 0.0, worst_herm = 0.0, min_eig = 1.0;
    auto sample = [&](double t, const Matrix& rho) {
        check_invariants(rho, t, opts, worst_trace, worst_herm);
        const Matrix herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        series.push_sample(t, extract_observables(rho, model.scheme));
        if (opts.keep_rho) series.rho_snapshots.push_back(rho);
    };

    Matrix rho = rho0;
    sample(0.0, rho);

    const double t_cut = cache.cutoff_time();
    std::size_t step = 0;
    const double dt = opts.dt;
    // direct 4th-order steps while the kernel integral still grows with t
    while (step < n_steps) {
        const double t = static_cast<double>(step) * dt;
        if (t >= t_cut && step % sample_every == 0) break;
        const Matrix k1 = liouvillian_apply(t, rho, cache, model);
        const Matrix k2 = liouvillian_apply(t + 0.5 * dt, rho + (0.5 * dt) * k1, cache, model);
        const Matrix k3 = liouvillian_apply(t + 0.5 * dt, rho + (0.5 * dt) * k2, cache, model);
        const Matrix k4 = liouvillian_apply(t + dt, rho + dt * k3, cache, model);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ++step;
        if (step % sample_every == 0) sample(static_cast<double>(step) * dt, rho);
    }

    if (step < n_steps) {
        // kernel saturated: the generator is now time independent, so build its
        // dense matrix once and advance whole sampling intervals by a
        // repeatedly squared one-step 4th-order propagator
        const std::size_t d2 = dim * dim;
        Matrix L(d2, d2);
        Matrix basis = Matrix::Zero(dim, dim);
        for (std::size_t col = 0; col < d2; ++col) {
            basis(col % dim, col / dim) = 1.0;
            const Matrix out = liouvillian_apply(t_cut, basis, cache, model);
            basis(col % dim, col / dim) = 0.0;
            for (std::size_t row = 0; row < d2; ++row) L(row, col) = out(row % dim, row / dim);
        }
        const Matrix M = L * dt;
        Matrix P = Matrix::Identity(d2, d2) + M + (M * M) / 2.0 + (M * M * M) / 6.0 +
                   (M * M * M * M) / 24.0;
        Matrix P_sample = Matrix::Identity(d2, d2);
        std::size_t e = sample_every;
        Matrix sq = P;
        while (e > 0) {
            if (e & 1u) P_sample = P_sample * sq;
            e >>= 1u;
            if (e) sq = sq * sq;
        }
        Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d2);
        while (step < n_steps) {
            v = P_sample * v;
            step += sample_every;
            rho = Eigen::Map<const Matrix>(v.data(), dim, dim);
            sample(static_cast<double>(step) * dt, rho);
        }
    }

    series.metadata["worst_trace_deviation"] = format_metadata(worst_trace);
    series.metadata["worst_hermiticity_deviation"] = format_metadata(worst_herm);
    series.metadata["min_eigenvalue"] = format_metadata(min_eig);
    series.metadata["engine"] = "polaron";
    return series;
}

SteadyResult find_steady_state(const TimeSeries& series, double window, double tol) {
    SteadyResult res;
    if (series.t.size() < 2) return res;
    const double t_end = series.t.back();
    if (t_end - series.t.front() < 2.0 * window) return res;

    auto window_start_index = [&](double t0) {
        std::size_t i = 0;
        while (i < series.t.size() && series.t[i] < t0) ++i;
        return i;
    };

    const std::size_t trail = window_start_index(t_end - window);
    bool ok = true;
    for (std::size_t c = 0; c < series.channels.size(); ++c) {
        double lo = series.channels[c][trail], hi = lo;
        for (std::size_t i = trail; i < series.t.size(); ++i) {
            lo = std::min(lo, series.channels[c][i]);
            hi = std::max(hi, series.channels[c][i]);
        }
        if (hi - lo >= tol) ok = false;
        double mean = 0.0;
        for (std::size_t i = trail; i < series.t.size(); ++i) mean += series.channels[c][i];
        mean /= static_cast<double>(series.t.size() - trail);
        res.values[series.channel_names[c]] = mean;
    }
    res.reached = ok;
    if (!ok) return res;

    // earliest sample from which every channel already stays within tol,
    // found via suffix running extrema
    const std::size_t n = series.t.size();
    std::size_t best = 0;
    for (std::size_t c = 0; c < series.channels.size(); ++c) {
        const auto& y = series.channels[c];
        double lo = y[n - 1], hi = y[n - 1];
        std::size_t first_ok = n - 1;
        for (std::size_t i = n - 1; i-- > 0;) {
            lo = std::min(lo, y[i]);
            hi = std::max(hi, y[i]);
            if (hi - lo < tol) first_ok = i;
            else break;
        }
        best = std::max(best, first_ok);
    }
    res.t_reached = series.t[best];
    return res;
}

} // namespace vchain
