#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "vchain/heisenberg_engine.hpp"

using namespace vchain;

namespace {

const std::complex<double> I{0.0, 1.0};

KGrid single_node_grid(double w, double g, double nbar) {
    KGrid grid;
    grid.nodes = {1.0};
    grid.frequencies = {w};
    grid.effective_couplings = {g};
    grid.thermal = {nbar};
    return grid;
}

Eigen::Matrix3cd random_complex3(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix3cd m;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m(a, b) = std::complex<double>(u(rng), u(rng));
    return m;
}

} // namespace

TEST_SUITE("heisenberg_engine") {

TEST_CASE("zero coupling reduces the sigma equation to the Heisenberg commutator") {
    const SystemModel m = build_single(DriveSpec{0.3, 0.2, -1.1}, 1.0);
    const KGrid grid = single_node_grid(1.0, 0.0, 0.5);
    HeisenbergState s = initial_heisenberg_state(m.initial_state(), 1);
    s.sigma = random_complex3(3);
    s.sigma_r[0] = random_complex3(4);
    s.sigma_rdag[0] = random_complex3(5);
    const HeisenbergState d = rhs(s, m, grid, HeisenbergOptions{});
    const Eigen::Matrix3cd comm = I * (m.h0 * s.sigma - s.sigma * m.h0);
    CHECK((d.sigma - comm).cwiseAbs().maxCoeff() < 1e-14);
    // phonon amplitudes only rotate at the node frequency
    const Eigen::Matrix3cd dr =
        I * (m.h0 * s.sigma_r[0] - s.sigma_r[0] * m.h0) - I * s.sigma_r[0];
    CHECK((d.sigma_r[0] - dr).cwiseAbs().maxCoeff() < 1e-14);
    const Eigen::Matrix3cd drd =
        I * (m.h0 * s.sigma_rdag[0] - s.sigma_rdag[0] * m.h0) + I * s.sigma_rdag[0];
    CHECK((d.sigma_rdag[0] - drd).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single-node phonon source terms are exact") {
    // h = 0, one k node: for sigma = |2><2| the source of <sigma r^dag> is
    // i g ((nbar+1) - nbar) sigma = i g sigma, and -i g sigma for <sigma r>
    const SystemModel m = build_single(DriveSpec{0.0, 0.0, 0.0}, 1.0);
    const double g = 0.37, nbar = 1.9;
    const KGrid grid = single_node_grid(0.8, g, nbar);
    HeisenbergState s = initial_heisenberg_state(Matrix::Zero(3, 3), 1);
    s.sigma.setZero();
    s.sigma(1, 1) = 1.0;
    const HeisenbergState d = rhs(s, m, grid, HeisenbergOptions{});
    Eigen::Matrix3cd expect_rd = Eigen::Matrix3cd::Zero();
    expect_rd(1, 1) = I * g;
    CHECK((d.sigma_rdag[0] - expect_rd).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((d.sigma_r[0] + expect_rd).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(d.sigma.cwiseAbs().maxCoeff() < 1e-15);

    // off-diagonal sigma = |2><1| feels only the SK side: K|1> = 0
    s.sigma.setZero();
    s.sigma(1, 0) = 1.0;
    const HeisenbergState d2 = rhs(s, m, grid, HeisenbergOptions{});
    Eigen::Matrix3cd expect2 = Eigen::Matrix3cd::Zero();
    expect2(1, 0) = I * g * (nbar + 1.0);  // (nbar+1) K S term, S K vanishes
    CHECK((d2.sigma_rdag[0] - expect2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("conjugation pairing is preserved by the equations of motion") {
    const SystemModel m = build_single(DriveSpec{0.25, 0.0, -1.5}, 1.0);
    const KGrid grid = single_node_grid(1.3, 0.21, 0.7);
    HeisenbergState s = initial_heisenberg_state(Matrix::Zero(3, 3), 1);
    const Eigen::Matrix3cd a = random_complex3(11);
    s.sigma = a + a.adjoint();
    s.sigma_r[0] = random_complex3(12);
    s.sigma_rdag[0] = s.sigma_r[0].adjoint();
    for (double ratio : {0.0, 0.1}) {
        HeisenbergOptions opts;
        opts.intraband_ratio = ratio;
        const HeisenbergState d = rhs(s, m, grid, opts);
        CHECK((d.sigma - d.sigma.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
        CHECK((d.sigma_rdag[0] - d.sigma_r[0].adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("ablation removes every sigma_23 pathway") {
    const SystemModel m = build_single(DriveSpec{0.25, 0.0, -1.5}, 1.0);
    const KGrid grid = single_node_grid(1.3, 0.21, 0.7);
    HeisenbergState s = initial_heisenberg_state(Matrix::Zero(3, 3), 1);
    s.sigma = random_complex3(21);
    s.sigma_r[0] = random_complex3(22);
    s.sigma_rdag[0] = random_complex3(23);
    HeisenbergOptions opts;
    opts.ablate_sigma23 = true;
    const HeisenbergState d = rhs(s, m, grid, opts);
    CHECK(std::abs(d.sigma(1, 2)) == 0.0);
    CHECK(std::abs(d.sigma(2, 1)) == 0.0);
    CHECK(std::abs(d.sigma_r[0](1, 2)) == 0.0);
    CHECK(std::abs(d.sigma_rdag[0](2, 1)) == 0.0);

    // and the ablated derivative must not depend on the sigma_23 inputs
    HeisenbergState s2 = s;
    s2.sigma(1, 2) += 0.5;
    s2.sigma_r[0](2, 1) -= 0.3;
    const HeisenbergState d2 = rhs(s2, m, grid, opts);
    CHECK((d.sigma - d2.sigma).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((d.sigma_r[0] - d2.sigma_r[0]).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("phonon-free evolution reproduces the bright-state Rabi flop") {
    const double omega = 0.2;
    const SystemModel m = build_single(DriveSpec{omega, 0.0, 0.0}, 1.0);
    const KGrid grid = single_node_grid(1.0, 0.0, 0.5);
    const HeisenbergState s0 = initial_heisenberg_state(m.initial_state(), 1);
    const TimeSeries series =
        evolve_heisenberg(m, grid, s0, 60.0, 0.01, 100, HeisenbergOptions{});
    for (std::size_t i = 0; i < series.n_samples(); ++i) {
        const double c = std::cos(std::sqrt(2.0) * omega * series.t[i]);
        CHECK(std::abs(series.channel("occ_1")[i] - c * c) < 1e-8);
    }
}

TEST_CASE("k-grid refinement is converged at the percent level") {
    BathSpec spec;
    const SystemModel m = build_single(DriveSpec{0.2, 0.0, -1.0 / hbar_meV_ps}, 1.0);
    double finals[2][3];
    const std::size_t nks[2] = {200, 400};
    for (int v = 0; v < 2; ++v) {
        const KGrid grid = build_kgrid(spec, nks[v]);
        const HeisenbergState s0 = initial_heisenberg_state(m.initial_state(), nks[v]);
        const TimeSeries series =
            evolve_heisenberg(m, grid, s0, 5.0, 0.002, 250, HeisenbergOptions{});
        for (int c = 0; c < 3; ++c)
            finals[v][c] = series.channel("occ_" + std::to_string(c + 1)).back();
    }
    for (int c = 0; c < 3; ++c) CHECK(std::abs(finals[0][c] - finals[1][c]) < 1e-2);
}

TEST_CASE("independent-boson reference line has a single maximum at the origin") {
    BathSpec spec;
    const auto tables = build_correlation_tables(spec, 20.0, 2001, 1e-8);
    std::vector<double> omega;
    for (int i = -600; i <= 600; ++i) omega.push_back(0.01 * i);
    const Spectrum sp = ibm_reference_spectrum(tables, omega);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < sp.alpha.size(); ++i)
        if (sp.alpha[i] > sp.alpha[imax]) imax = i;
    CHECK(std::abs(sp.omega[imax]) < 1e-12);
    // one dominant peak: any other local maximum (windowing sidelobes) stays
    // far below the zero-phonon line
    for (std::size_t i : local_maxima(sp.alpha))
        if (i != imax) CHECK(sp.alpha[i] < 0.1 * sp.alpha[imax]);
}

TEST_CASE("independent-boson line is stable under tau-grid refinement") {
    BathSpec spec;
    const auto coarse = build_correlation_tables(spec, 20.0, 2001, 1e-8);
    const auto fine = build_correlation_tables(spec, 20.0, 4001, 1e-8);
    std::vector<double> omega;
    for (int i = -120; i <= 120; ++i) omega.push_back(0.05 * i);
    const Spectrum a = ibm_reference_spectrum(coarse, omega);
    const Spectrum b = ibm_reference_spectrum(fine, omega);
    double amax = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
        amax = std::max(amax, std::abs(b.alpha[i]));
        diff = std::max(diff, std::abs(a.alpha[i] - b.alpha[i]));
    }
    CHECK(diff < 0.01 * amax);
}

TEST_CASE("V absorption spectrum peaks at the laser-frame origin") {
    BathSpec spec;
    const KGrid grid = build_kgrid(spec, 400);
    const SystemModel m = build_single(DriveSpec{0.0, 0.0, -1.0 / hbar_meV_ps}, 1.0);
    SpectrumConfig cfg;
    cfg.t_end = 100.0;
    cfg.dt = 0.002;
    const Spectrum sp = absorption_spectrum(m, grid, cfg);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < sp.alpha.size(); ++i)
        if (sp.alpha[i] > sp.alpha[imax]) imax = i;
    CHECK(std::abs(sp.omega[imax]) < 0.05);
    CHECK(local_maxima(sp.alpha).size() >= 2);  // zero-phonon line + detuned transition

    const SystemModel driven = build_single(DriveSpec{0.1, 0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(absorption_spectrum(driven, grid, cfg), ConfigError);
}

TEST_CASE("guards: horizon cap, frequency resolution, dimension") {
    const SystemModel m = build_single(DriveSpec{0.2, 0.0, 0.0}, 1.0);
    const KGrid grid = single_node_grid(50.0, 0.1, 0.5);
    const HeisenbergState s0 = initial_heisenberg_state(m.initial_state(), 1);
    CHECK_THROWS_AS(evolve_heisenberg(m, grid, s0, 500.0, 0.001, 100, HeisenbergOptions{}),
                    ConfigError);
    CHECK_THROWS_AS(evolve_heisenberg(m, grid, s0, 10.0, 0.01, 100, HeisenbergOptions{}),
                    ConfigError);  // dt * w_max = 0.5 > 0.1
    CHECK_THROWS_AS(initial_heisenberg_state(Matrix::Zero(4, 4), 1), ConfigError);
}

} // TEST_SUITE
