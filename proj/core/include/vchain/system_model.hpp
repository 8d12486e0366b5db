#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "vchain/errors.hpp"

namespace vchain {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class SchemeKind { Single, DexterSingle, DexterAll, Foerster };

struct LevelScheme {
    SchemeKind kind = SchemeKind::Single;
    std::size_t n_sites = 1;
    std::size_t dim = 3;

    // Dexter-type chains: one electron on 3N levels; level i of site l (i in
    // 1..3, l in 0..N-1) sits at global basis index 3l + i - 1.
    std::size_t dexter_index(std::size_t site, std::size_t level) const;
    // Foerster chains: per-site levels {0,1,2,3}, product space of dim 4^N,
    // site 0 is the most significant digit.
    std::size_t foerster_index(const std::vector<int>& levels) const;
};

struct DriveSpec {
    double rabi = 0.1;        // Omega, 1/ps
    double detuning2 = 0.0;   // Delta_2, 1/ps
    double detuning3 = 0.0;   // Delta_3, 1/ps; delta_eps = hbar (Delta3 - Delta2)
};

// Site-local polaron-frame coupling operator pair: X+ = s_1i + s_i1,
// X- = i (s_i1 - s_1i), for excited index i in {2,3}.
struct XOperator {
    std::size_t site = 0;
    int excited_index = 2;
    Matrix x_plus;
    Matrix x_minus;
};

struct SystemModel {
    LevelScheme scheme;
    DriveSpec drive;
    Matrix h0;                         // H_p0 / hbar, 1/ps, with polaron-renormalized drive
    std::vector<XOperator> x_ops;      // 2 entries per site
    double dexter_f = 0.0;             // interdot amplitude, 1/ps
    double gamma_r = 0.0;              // radiative rate, 1/ps (0 disables)
    bool ablate_sigma23 = false;
    double polaron_factor = 1.0;
    double shift = 0.0;                // polaron shift applied to detunings, 1/ps

    Matrix initial_state() const;      // electron in ground state of site 1
};

SystemModel build_single(const DriveSpec& drive, double polaron_factor, double shift = 0.0);
SystemModel build_dexter_single_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                      double polaron_factor, double shift = 0.0);
SystemModel build_dexter_all_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                   double polaron_factor, double shift = 0.0);
SystemModel build_foerster_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                 double polaron_factor, double shift = 0.0,
                                 bool allow_large = false);

// Lowering operators |g_l><e_{l,i}| for the radiative Lindblad dissipator.
std::vector<Matrix> radiative_dissipator(const LevelScheme& scheme, double gamma_r);

// Normalized drive eigenbasis at zero detuning: |-, +, D>.
struct DressedBasis {
    Vector minus, plus, dark;
};
DressedBasis dressed_basis();

} // namespace vchain
