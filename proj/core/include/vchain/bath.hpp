#pragma once

#include <complex>
#include <vector>

#include "vchain/constants.hpp"
#include "vchain/errors.hpp"

namespace vchain {

enum class BathKind { Microscopic, ParametricSuperohmic, Gaussian, Lorentzian };

// Microscopic deformation-potential parameters, given in lab (SI-ish) units and
// converted internally. Defaults are a GaAs-style set chosen so that phi(tau)
// decays within a few ps at 4 K and the spectral density peaks near 1 meV.
struct MicroscopicParams {
    double sound_velocity_m_s = 5110.0;
    double mass_density_kg_m3 = 5370.0;
    double deformation_potential_eV = 6.0;
    double effective_mass_kg = 6.1029871e-32;   // 0.067 electron masses
    double confinement_energy_meV = 30.0;
};

// Parametric spectral-density families, J(omega) = alpha * omega^3 * F(omega/omega_c)^2.
struct ParametricParams {
    double alpha = 0.02;              // ps^2
    double cutoff_energy_meV = 1.5;   // hbar * omega_c
};

struct BathSpec {
    BathKind kind = BathKind::Microscopic;
    double temperature_K = 4.0;
    MicroscopicParams microscopic;
    ParametricParams parametric;
    double coupling_scale = 1.0;

    double sound_velocity() const;   // nm/ps; parametric families reuse the GaAs value
    void validate() const;
};

struct CorrelationTables {
    std::vector<double> tau_grid;                 // ps, uniform from 0
    std::vector<std::complex<double>> phi;        // phi(tau)
    std::vector<std::complex<double>> g_plus;     // cosh(phi) - 1
    std::vector<std::complex<double>> g_minus;    // sinh(phi)
    double polaron_factor = 1.0;                  // B = exp(-phi(0)/2)
    double polaron_shift = 0.0;                   // integral d3k g^2/omega, 1/ps
    std::size_t memory_cutoff_index = 0;          // first index after which |G+-| < kernel_tol
    bool cutoff_clamped = false;                  // tolerance never reached within tau_max

    double dtau() const { return tau_grid.size() > 1 ? tau_grid[1] - tau_grid[0] : 0.0; }
};

struct KGrid {
    std::vector<double> nodes;                // k_j, 1/nm
    std::vector<double> effective_couplings;  // g(k_j) * sqrt(4 pi k_j^2 dk), 1/ps
    std::vector<double> frequencies;          // omega_j = c_s k_j, 1/ps
    std::vector<double> thermal;              // n_bar(omega_j) at the bath temperature
};

// Coupling element g(k) in 1/ps, including the (2 pi)^-3/2 measure
// normalization so that phi(tau) = int 4 pi k^2 dk (g^2/omega^2)[...] without
// further prefactors.
double coupling_g(double k, const BathSpec& spec);

std::complex<double> phi_of_tau(double tau, const BathSpec& spec);

double polaron_shift(const BathSpec& spec);

CorrelationTables build_correlation_tables(const BathSpec& spec, double tau_max,
                                           std::size_t n_tau, double kernel_tol);

double thermal_occupation(double omega, double temperature_K);

KGrid build_kgrid(const BathSpec& spec, std::size_t n_k, double k_max = 0.0);

// Upper integration bound for the radial k quadrature (auto-detected from the
// form-factor tail). Exposed for tests and for build_kgrid's default.
double default_k_max(const BathSpec& spec);

} // namespace vchain
