#include <doctest.h>

#include <cmath>

#include "vchain/system_model.hpp"

using namespace vchain;

TEST_SUITE("system_model") {

TEST_CASE("drive eigensystem at zero detuning is analytic") {
    const double omega_bar = 0.37;
    DriveSpec drive{omega_bar, 0.0, 0.0};
    const SystemModel m = build_single(drive, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m.h0);
    const auto ev = es.eigenvalues();
    const double s2 = std::sqrt(2.0) * omega_bar;
    CHECK(std::abs(ev[0] + s2) < 1e-12);
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2] - s2) < 1e-12);

    const DressedBasis b = dressed_basis();
    CHECK((m.h0 * b.dark).norm() < 1e-12);  // dark state is annihilated
    CHECK(std::abs(b.minus.norm() - 1.0) < 1e-14);
    CHECK(std::abs(b.plus.norm() - 1.0) < 1e-14);
    CHECK(std::abs(b.dark.norm() - 1.0) < 1e-14);
    // eigenvector property for the bright pair
    CHECK((m.h0 * b.minus + s2 * b.minus).norm() < 1e-12);
    CHECK((m.h0 * b.plus - s2 * b.plus).norm() < 1e-12);
}

TEST_CASE("polaron renormalization and shift enter the single-emitter Hamiltonian") {
    DriveSpec drive{0.2, 0.3, -1.4};
    const double B = 0.8, shift = 0.05;
    const SystemModel m = build_single(drive, B, shift);
    CHECK(std::abs(m.h0(0, 1) - B * drive.rabi) < 1e-15);
    CHECK(std::abs(m.h0(0, 2) - B * drive.rabi) < 1e-15);
    CHECK(std::abs(m.h0(1, 1) - (drive.detuning2 - shift)) < 1e-15);
    CHECK(std::abs(m.h0(2, 2) - (drive.detuning3 - shift)) < 1e-15);
    CHECK(std::abs(m.h0(1, 2)) == 0.0);
}

TEST_CASE("X operators are Hermitian and site-local") {
    const SystemModel m = build_dexter_single_chain(3, DriveSpec{0.1, 0.0, -1.5}, 0.1, 1.0);
    REQUIRE(m.x_ops.size() == 6);
    for (const auto& x : m.x_ops) {
        CHECK((x.x_plus - x.x_plus.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((x.x_minus - x.x_minus.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        // support only on this site's ground/excited pair
        const std::size_t g = m.scheme.dexter_index(x.site, 1);
        const std::size_t e = m.scheme.dexter_index(x.site, x.excited_index);
        Matrix probe = x.x_plus;
        probe(g, e) = 0.0;
        probe(e, g) = 0.0;
        CHECK(probe.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Dexter chain index map and couplings") {
    LevelScheme scheme{SchemeKind::DexterSingle, 4, 12};
    CHECK(scheme.dexter_index(0, 1) == 0);
    CHECK(scheme.dexter_index(2, 3) == 8);

    const double f = 0.17;
    const SystemModel single = build_dexter_single_chain(4, DriveSpec{0.1, 0.0, -1.5}, f, 1.0);
    // |3>_l <-> |2>_{l+1} only
    for (std::size_t l = 0; l + 1 < 4; ++l) {
        CHECK(std::abs(single.h0(scheme.dexter_index(l, 3), scheme.dexter_index(l + 1, 2)) - f) <
              1e-15);
        CHECK(std::abs(single.h0(scheme.dexter_index(l, 2), scheme.dexter_index(l + 1, 2))) == 0.0);
        CHECK(std::abs(single.h0(scheme.dexter_index(l, 3), scheme.dexter_index(l + 1, 3))) == 0.0);
    }

    const SystemModel all = build_dexter_all_chain(4, DriveSpec{0.1, 0.0, -1.5}, f, 1.0);
    for (std::size_t l = 0; l + 1 < 4; ++l)
        for (std::size_t a : {2u, 3u})
            for (std::size_t b : {2u, 3u})
                CHECK(std::abs(all.h0(scheme.dexter_index(l, a), scheme.dexter_index(l + 1, b)) -
                               f) < 1e-15);

    // no couplings beyond nearest neighbours
    CHECK(std::abs(all.h0(scheme.dexter_index(0, 3), scheme.dexter_index(2, 2))) == 0.0);
}

TEST_CASE("Foerster chain structure") {
    LevelScheme scheme{SchemeKind::Foerster, 2, 16};
    CHECK(scheme.foerster_index({0, 0}) == 0);
    CHECK(scheme.foerster_index({1, 0}) == 4);
    CHECK(scheme.foerster_index({3, 2}) == 14);

    const double f = 0.1, B = 0.9;
    DriveSpec drive{0.1, 0.0, -1.5};
    const SystemModel m = build_foerster_chain(2, drive, f, B);
    REQUIRE(m.scheme.dim == 16);
    // transfer element |3,0> <-> |0,2>
    CHECK(std::abs(m.h0(scheme.foerster_index({3, 0}), scheme.foerster_index({0, 2})) - f) < 1e-15);
    // drive couples |1,x> to |2,x> and |3,x> with the renormalized Rabi energy
    CHECK(std::abs(m.h0(scheme.foerster_index({1, 0}), scheme.foerster_index({2, 0})) -
                   B * drive.rabi) < 1e-15);
    CHECK(std::abs(m.h0(scheme.foerster_index({1, 3}), scheme.foerster_index({3, 3})) -
                   B * drive.rabi) < 1e-15);
    // the reservoir level |0> is dark: no drive out of |0,0>
    for (std::size_t s = 1; s < 16; ++s) CHECK(std::abs(m.h0(0, s)) == 0.0);

    // initial state: electron in |1> of site 1, site 2 parked in |0>
    const Matrix rho0 = m.initial_state();
    CHECK(std::abs(rho0(scheme.foerster_index({1, 0}), scheme.foerster_index({1, 0})) - 1.0) <
          1e-15);
    CHECK(std::abs(rho0.trace().real() - 1.0) < 1e-15);

    CHECK_THROWS_AS(build_foerster_chain(4, drive, f, B), ConfigError);
    CHECK_NOTHROW(build_foerster_chain(4, drive, f, B, 0.0, true));
}

TEST_CASE("dressed projections of reference states") {
    const DressedBasis b = dressed_basis();
    // rho = |1><1|
    Matrix rho = Matrix::Zero(3, 3);
    rho(0, 0) = 1.0;
    CHECK(std::abs((b.minus.adjoint() * rho * b.minus)(0).real() - 0.5) < 1e-14);
    CHECK(std::abs((b.plus.adjoint() * rho * b.plus)(0).real() - 0.5) < 1e-14);
    CHECK(std::abs((b.dark.adjoint() * rho * b.dark)(0).real()) < 1e-14);
    // rho = |3><3|
    rho.setZero();
    rho(2, 2) = 1.0;
    CHECK(std::abs((b.dark.adjoint() * rho * b.dark)(0).real() - 0.5) < 1e-14);
    CHECK(std::abs((b.minus.adjoint() * rho * b.minus)(0).real() - 0.25) < 1e-14);
    CHECK(std::abs((b.plus.adjoint() * rho * b.plus)(0).real() - 0.25) < 1e-14);
}

TEST_CASE("radiative lowering operators") {
    const auto none = radiative_dissipator({SchemeKind::DexterSingle, 2, 6}, 0.0);
    CHECK(none.empty());
    const auto ops = radiative_dissipator({SchemeKind::DexterSingle, 2, 6}, 1e-4);
    REQUIRE(ops.size() == 4);
    for (const auto& L : ops) {
        CHECK(L.cwiseAbs().sum() == 1.0);  // single matrix element per operator
        CHECK((L * L).cwiseAbs().maxCoeff() == 0.0);  // nilpotent lowering
    }
    const auto fops = radiative_dissipator({SchemeKind::Foerster, 2, 16}, 1e-4);
    REQUIRE(fops.size() == 4);
    // each Foerster lowering operator maps |i>_site -> |1>_site on 4 basis states
    for (const auto& L : fops) CHECK(L.cwiseAbs().sum() == 4.0);
    CHECK_THROWS_AS(radiative_dissipator({SchemeKind::Single, 1, 3}, -1.0), ConfigError);
}

} // TEST_SUITE
