#include "vchain/bath.hpp"

#include <algorithm>
#include <cmath>

namespace vchain {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Micro {
    double cs;      // nm/ps
    double rho;     // meV ps^2 / nm^5
    double D;       // meV
    double m;       // meV ps^2 / nm^2
    double w_conf;  // 1/ps
};

Micro to_internal(const MicroscopicParams& p) {
    Micro m;
    m.cs = p.sound_velocity_m_s * m_per_s_to_nm_per_ps;
    m.rho = p.mass_density_kg_m3 * kg_per_m3_to_internal;
    m.D = p.deformation_potential_eV * eV_to_meV;
    m.m = p.effective_mass_kg * kg_to_internal;
    m.w_conf = p.confinement_energy_meV / hbar_meV_ps;
    return m;
}

// J(omega)/omega^2-style radial integrand prefactor 4 pi k^2 g^2, evaluated
// with k clamped away from 0 (the integrand has a finite k->0 limit that a
// literal evaluation at k = 0 would miss because g(0) = 0).
constexpr double k_floor = 1e-9;

} // namespace

double BathSpec::sound_velocity() const {
    return microscopic.sound_velocity_m_s * m_per_s_to_nm_per_ps;
}

void BathSpec::validate() const {
    if (temperature_K <= 0.0) throw ConfigError("bath.temperature must be > 0");
    if (coupling_scale < 0.0) throw ConfigError("bath.coupling_scale must be >= 0");
    if (kind == BathKind::Microscopic) {
        const auto& p = microscopic;
        if (p.sound_velocity_m_s <= 0 || p.mass_density_kg_m3 <= 0 ||
            p.deformation_potential_eV <= 0 || p.effective_mass_kg <= 0 ||
            p.confinement_energy_meV <= 0)
            throw ConfigError("bath.microscopic parameters must all be > 0");
    } else {
        if (parametric.alpha < 0) throw ConfigError("bath.parametric.alpha must be >= 0");
        if (parametric.cutoff_energy_meV <= 0)
            throw ConfigError("bath.parametric.cutoff_energy must be > 0");
    }
}

double coupling_g(double k, const BathSpec& spec) {
    if (k < 0.0) throw ConfigError("coupling_g: negative wavenumber");
    if (k == 0.0 || spec.coupling_scale == 0.0) return 0.0;
    const double cs = spec.sound_velocity();
    if (spec.kind == BathKind::Microscopic) {
        const Micro mp = to_internal(spec.microscopic);
        const double raw = (mp.D / hbar_meV_ps) * std::sqrt(hbar_meV_ps * k / (2.0 * mp.rho * mp.cs)) *
                           std::exp(-hbar_meV_ps * k * k / (4.0 * mp.m * mp.w_conf));
        return spec.coupling_scale * raw / std::pow(2.0 * pi, 1.5);
    }
    // Parametric families: J(w) = alpha w^3 F^2, with 4 pi k^2 g^2 / cs = J(cs k).
    const double w = cs * k;
    const double wc = spec.parametric.cutoff_energy_meV / hbar_meV_ps;
    double F = 1.0;
    switch (spec.kind) {
        case BathKind::ParametricSuperohmic: F = std::exp(-0.5 * w * w / (wc * wc)); break;
        case BathKind::Gaussian: F = std::exp(-(w / wc) * (w / wc)); break;
        case BathKind::Lorentzian: F = 1.0 / (1.0 + (w / wc) * (w / wc)); break;
        default: break;
    }
    const double J = spec.parametric.alpha * w * w * w * F * F;
    return spec.coupling_scale * std::sqrt(J * cs / (4.0 * pi * k * k));
}

double default_k_max(const BathSpec& spec) {
    // Grow the window until the tail of the radial integrand weight
    // k^2 g^2 / omega^2 is negligible, then shrink back to a tight bound.
    // (The phi quadrature integrates this weight times bounded factors; the
    // bare k^2 g^2 would decay too slowly for the Lorentzian family.)
    const double cs = spec.sound_velocity();
    auto weight = [&](double k) {
        k = std::max(k, k_floor);
        const double g = coupling_g(k, spec);
        const double w = cs * k;
        return k * k * g * g / (w * w);
    };
    double K = 1.0;
    for (int iter = 0; iter < 28; ++iter) {
        const int n = 2048;
        double wmax = 0.0;
        for (int j = 0; j <= n; ++j) wmax = std::max(wmax, weight(K * j / n));
        if (wmax == 0.0) return K;  // zero coupling; any window works
        if (weight(K) < 1e-9 * wmax) {
            int j = n;
            while (j > 1 && weight(K * (j - 1) / n) < 1e-9 * wmax) --j;
            return K * j / n;
        }
        K *= 2.0;
    }
    throw NumericalError("default_k_max: form factor does not decay");
}

namespace {

// composite Simpson over [0, k_max] of pref(k) * w(k, tau)
template <typename F>
std::complex<double> simpson(const F& f, double a, double b, std::size_t n) {
    // n intervals (even)
    const double h = (b - a) / static_cast<double>(n);
    std::complex<double> acc = f(a) + f(b);
    for (std::size_t j = 1; j < n; ++j) acc += f(a + h * j) * (j % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

std::complex<double> phi_quadrature(double tau, const BathSpec& spec, std::size_t n) {
    const double cs = spec.sound_velocity();
    const double beta_h = hbar_meV_ps / (kB_meV_per_K * spec.temperature_K);
    const double kmax = default_k_max(spec);
    auto integrand = [&](double k) -> std::complex<double> {
        k = std::max(k, k_floor);
        const double g = coupling_g(k, spec);
        const double w = cs * k;
        const double pref = 4.0 * pi * k * k * g * g / (w * w);
        const double coth = 1.0 / std::tanh(0.5 * beta_h * w);
        return pref * std::complex<double>(coth * std::cos(w * tau), -std::sin(w * tau));
    };
    return simpson(integrand, 0.0, kmax, n);
}

// smallest Simpson node count that passes the Richardson check at a few
// representative delays; shared by the table builder
std::size_t converged_node_count(const BathSpec& spec) {
    std::size_t n = 4096;
    for (; n <= 65536; n *= 2) {
        bool ok = true;
        for (double tau : {0.0, 0.7, 5.0}) {
            const auto coarse = phi_quadrature(tau, spec, n);
            const auto fine = phi_quadrature(tau, spec, 2 * n);
            if (std::abs(fine - coarse) / 15.0 >= 1e-8) { ok = false; break; }
        }
        if (ok) return 2 * n;
    }
    throw NumericalError("bath quadrature failed to converge to 1e-8");
}

} // namespace

std::complex<double> phi_of_tau(double tau, const BathSpec& spec) {
    if (spec.coupling_scale == 0.0) return {0.0, 0.0};
    // phi(-tau) = conj(phi(tau))
    const double at = std::abs(tau);
    std::size_t n = 4096;
    std::complex<double> coarse = phi_quadrature(at, spec, n);
    for (int iter = 0; iter < 3; ++iter) {
        const std::complex<double> fine = phi_quadrature(at, spec, 2 * n);
        // Richardson error estimate for a 4th-order rule
        if (std::abs(fine - coarse) / 15.0 < 1e-8) {
            const std::complex<double> val = fine;
            return tau < 0.0 ? std::conj(val) : val;
        }
        coarse = fine;
        n *= 2;
    }
    throw NumericalError("phi_of_tau: quadrature failed to converge to 1e-8");
}

double polaron_shift(const BathSpec& spec) {
    if (spec.coupling_scale == 0.0) return 0.0;
    const double cs = spec.sound_velocity();
    const double kmax = default_k_max(spec);
    auto integrand = [&](double k) -> std::complex<double> {
        k = std::max(k, k_floor);
        const double g = coupling_g(k, spec);
        return 4.0 * pi * k * k * g * g / (cs * k);
    };
    return simpson(integrand, 0.0, kmax, converged_node_count(spec)).real();
}

CorrelationTables build_correlation_tables(const BathSpec& spec, double tau_max,
                                           std::size_t n_tau, double kernel_tol) {
    if (tau_max <= 0.0 || n_tau < 2) throw ConfigError("correlation tables need tau_max > 0, n_tau >= 2");
    spec.validate();
    CorrelationTables tab;
    tab.tau_grid.resize(n_tau);
    tab.phi.resize(n_tau);
    tab.g_plus.resize(n_tau);
    tab.g_minus.resize(n_tau);
    const double dtau = tau_max / static_cast<double>(n_tau - 1);

    // One shared quadrature grid: precompute the k-dependent factors once and
    // sweep tau, instead of re-running the adaptive quadrature per node.
    const double cs = spec.sound_velocity();
    const double beta_h = hbar_meV_ps / (kB_meV_per_K * spec.temperature_K);
    const bool zero = spec.coupling_scale == 0.0;
    const double kmax = zero ? 1.0 : default_k_max(spec);

    const std::size_t nq = zero ? 8 : converged_node_count(spec);
    std::vector<double> pref(nq + 1), coth(nq + 1), omega(nq + 1), sw(nq + 1);
    if (!zero) {
        const double h = kmax / static_cast<double>(nq);
        for (std::size_t j = 0; j <= nq; ++j) {
            double k = std::max(h * static_cast<double>(j), k_floor);
            const double g = coupling_g(k, spec);
            const double w = cs * k;
            pref[j] = 4.0 * pi * k * k * g * g / (w * w);
            coth[j] = 1.0 / std::tanh(0.5 * beta_h * w);
            omega[j] = w;
            sw[j] = (j == 0 || j == nq) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            sw[j] *= h / 3.0;
        }
    }

    for (std::size_t i = 0; i < n_tau; ++i) {
        const double tau = dtau * static_cast<double>(i);
        tab.tau_grid[i] = tau;
        std::complex<double> phi{0.0, 0.0};
        if (!zero) {
            double re = 0.0, im = 0.0;
            for (std::size_t j = 0; j <= nq; ++j) {
                const double c = std::cos(omega[j] * tau);
                const double s = std::sin(omega[j] * tau);
                re += sw[j] * pref[j] * coth[j] * c;
                im -= sw[j] * pref[j] * s;
            }
            phi = {re, im};
        }
        tab.phi[i] = phi;
        tab.g_plus[i] = std::cosh(phi) - 1.0;
        tab.g_minus[i] = std::sinh(phi);
    }

    tab.polaron_factor = std::exp(-0.5 * tab.phi[0].real());
    tab.polaron_shift = polaron_shift(spec);

    // first index after which both |G+-| stay below kernel_tol
    std::size_t cut = 0;
    for (std::size_t i = 0; i < n_tau; ++i)
        if (std::abs(tab.g_plus[i]) >= kernel_tol || std::abs(tab.g_minus[i]) >= kernel_tol) cut = i;
    if (cut + 1 >= n_tau && !zero) {
        tab.cutoff_clamped = true;
        tab.memory_cutoff_index = n_tau - 1;
    } else {
        tab.memory_cutoff_index = zero ? 0 : cut + 1;
    }
    return tab;
}

double thermal_occupation(double omega, double temperature_K) {
    if (omega <= 0.0) throw ConfigError("thermal_occupation: omega must be > 0");
    if (temperature_K <= 0.0) throw ConfigError("thermal_occupation: temperature must be > 0");
    return 1.0 / std::expm1(hbar_meV_ps * omega / (kB_meV_per_K * temperature_K));
}

KGrid build_kgrid(const BathSpec& spec, std::size_t n_k, double k_max) {
    if (n_k < 8) throw ConfigError("k-grid needs n_k >= 8");
    spec.validate();
    if (k_max <= 0.0) k_max = spec.coupling_scale == 0.0 ? 1.0 : default_k_max(spec);
    KGrid grid;
    grid.nodes.resize(n_k);
    grid.effective_couplings.resize(n_k);
    grid.frequencies.resize(n_k);
    grid.thermal.resize(n_k);
    const double dk = k_max / static_cast<double>(n_k);
    const double cs = spec.sound_velocity();
    double gmax = 0.0;
    for (std::size_t j = 0; j < n_k; ++j) {
        const double k = dk * (static_cast<double>(j) + 0.5);
        const double g = coupling_g(k, spec);
        grid.nodes[j] = k;
        grid.frequencies[j] = cs * k;
        grid.effective_couplings[j] = g * std::sqrt(4.0 * pi * k * k * dk);
        grid.thermal[j] = thermal_occupation(grid.frequencies[j], spec.temperature_K);
        gmax = std::max(gmax, g);
    }
    if (gmax > 0.0 && coupling_g(k_max, spec) >= 1e-4 * gmax)
        throw ConfigError("k-grid tail condition unsatisfied; increase n_k or k_max");
    return grid;
}

} // namespace vchain
