#include "vchain/system_model.hpp"

#include <cmath>

namespace vchain {

namespace {
const std::complex<double> I{0.0, 1.0};

Matrix unit(std::size_t dim, std::size_t a, std::size_t b) {
    Matrix m = Matrix::Zero(dim, dim);
    m(a, b) = 1.0;
    return m;
}

// drive + detunings for one V block rooted at global ground index g
void add_v_block(Matrix& h, std::size_t g, const DriveSpec& d, double B, double shift) {
    const double obar = B * d.rabi;
    h(g + 1, g + 1) += d.detuning2 - shift;
    h(g + 2, g + 2) += d.detuning3 - shift;
    h(g, g + 1) += obar;
    h(g + 1, g) += obar;
    h(g, g + 2) += obar;
    h(g + 2, g) += obar;
}

XOperator make_x(std::size_t dim, std::size_t site, int i, std::size_t ground, std::size_t excited) {
    XOperator x;
    x.site = site;
    x.excited_index = i;
    x.x_plus = unit(dim, ground, excited) + unit(dim, excited, ground);
    x.x_minus = I * (unit(dim, excited, ground) - unit(dim, ground, excited));
    return x;
}
} // namespace

std::size_t LevelScheme::dexter_index(std::size_t site, std::size_t level) const {
    return 3 * site + level - 1;
}

std::size_t LevelScheme::foerster_index(const std::vector<int>& levels) const {
    std::size_t idx = 0;
    for (int lv : levels) idx = 4 * idx + static_cast<std::size_t>(lv);
    return idx;
}

Matrix SystemModel::initial_state() const {
    Matrix rho = Matrix::Zero(scheme.dim, scheme.dim);
    if (scheme.kind == SchemeKind::Foerster) {
        // electron in |1> of site 1, remaining sites parked in the reservoir |0>
        std::vector<int> lv(scheme.n_sites, 0);
        lv[0] = 1;
        const std::size_t i = scheme.foerster_index(lv);
        rho(i, i) = 1.0;
    } else {
        rho(0, 0) = 1.0;
    }
    return rho;
}

SystemModel build_single(const DriveSpec& drive, double polaron_factor, double shift) {
    SystemModel m;
    m.scheme = {SchemeKind::Single, 1, 3};
    m.drive = drive;
    m.polaron_factor = polaron_factor;
    m.shift = shift;
    m.h0 = Matrix::Zero(3, 3);
    add_v_block(m.h0, 0, drive, polaron_factor, shift);
    m.x_ops.push_back(make_x(3, 0, 2, 0, 1));
    m.x_ops.push_back(make_x(3, 0, 3, 0, 2));
    return m;
}

namespace {
SystemModel build_dexter(std::size_t n_sites, const DriveSpec& drive, double f,
                         double polaron_factor, double shift, bool all_pairs) {
    if (n_sites < 2) throw ConfigError("chain schemes need n_sites >= 2");
    SystemModel m;
    m.scheme = {all_pairs ? SchemeKind::DexterAll : SchemeKind::DexterSingle, n_sites, 3 * n_sites};
    m.drive = drive;
    m.dexter_f = f;
    m.polaron_factor = polaron_factor;
    m.shift = shift;
    const std::size_t dim = m.scheme.dim;
    m.h0 = Matrix::Zero(dim, dim);
    for (std::size_t l = 0; l < n_sites; ++l) {
        add_v_block(m.h0, 3 * l, drive, polaron_factor, shift);
        m.x_ops.push_back(make_x(dim, l, 2, 3 * l, 3 * l + 1));
        m.x_ops.push_back(make_x(dim, l, 3, 3 * l, 3 * l + 2));
    }
    for (std::size_t l = 0; l + 1 < n_sites; ++l) {
        const auto idx = [&](std::size_t site, std::size_t level) { return m.scheme.dexter_index(site, level); };
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        if (all_pairs) {
            pairs = {{idx(l, 2), idx(l + 1, 2)}, {idx(l, 2), idx(l + 1, 3)},
                     {idx(l, 3), idx(l + 1, 2)}, {idx(l, 3), idx(l + 1, 3)}};
        } else {
            // wave-function overlap only between |3>_l and |2>_{l+1}
            pairs = {{idx(l, 3), idx(l + 1, 2)}};
        }
        for (auto [a, b] : pairs) {
            m.h0(a, b) += f;
            m.h0(b, a) += f;
        }
    }
    return m;
}
} // namespace

SystemModel build_dexter_single_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                      double polaron_factor, double shift) {
    return build_dexter(n_sites, drive, f, polaron_factor, shift, false);
}

SystemModel build_dexter_all_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                   double polaron_factor, double shift) {
    return build_dexter(n_sites, drive, f, polaron_factor, shift, true);
}

SystemModel build_foerster_chain(std::size_t n_sites, const DriveSpec& drive, double f,
                                 double polaron_factor, double shift, bool allow_large) {
    if (n_sites < 2) throw ConfigError("chain schemes need n_sites >= 2");
    if (n_sites > 3 && !allow_large)
        throw ConfigError("Foerster chains with n_sites > 3 must be explicitly enabled");
    SystemModel m;
    std::size_t dim = 1;
    for (std::size_t l = 0; l < n_sites; ++l) dim *= 4;
    m.scheme = {SchemeKind::Foerster, n_sites, dim};
    m.drive = drive;
    m.dexter_f = f;
    m.polaron_factor = polaron_factor;
    m.shift = shift;
    m.h0 = Matrix::Zero(dim, dim);
    const double obar = polaron_factor * drive.rabi;

    std::vector<int> lv(n_sites, 0);
    // enumerate product basis states; |0> is dark (no drive, no detuning, no phonons)
    for (std::size_t s = 0; s < dim; ++s) {
        std::size_t rem = s;
        for (std::size_t l = n_sites; l-- > 0;) {
            lv[l] = static_cast<int>(rem % 4);
            rem /= 4;
        }
        double diag = 0.0;
        for (std::size_t l = 0; l < n_sites; ++l) {
            if (lv[l] == 2) diag += drive.detuning2 - shift;
            if (lv[l] == 3) diag += drive.detuning3 - shift;
        }
        m.h0(s, s) += diag;
        for (std::size_t l = 0; l < n_sites; ++l) {
            if (lv[l] == 1) {
                for (int tgt : {2, 3}) {
                    auto lv2 = lv;
                    lv2[l] = tgt;
                    const std::size_t s2 = m.scheme.foerster_index(lv2);
                    m.h0(s, s2) += obar;
                    m.h0(s2, s) += obar;
                }
            }
            if (l + 1 < n_sites && lv[l] == 3 && lv[l + 1] == 0) {
                auto lv2 = lv;
                lv2[l] = 0;
                lv2[l + 1] = 2;
                const std::size_t s2 = m.scheme.foerster_index(lv2);
                m.h0(s, s2) += f;
                m.h0(s2, s) += f;
            }
        }
    }

    // site-local X operators act on the {1,2,3} triple of each site
    for (std::size_t site = 0; site < n_sites; ++site) {
        for (int i : {2, 3}) {
            XOperator x;
            x.site = site;
            x.excited_index = i;
            x.x_plus = Matrix::Zero(dim, dim);
            x.x_minus = Matrix::Zero(dim, dim);
            for (std::size_t s = 0; s < dim; ++s) {
                std::size_t rem = s;
                for (std::size_t l = n_sites; l-- > 0;) {
                    lv[l] = static_cast<int>(rem % 4);
                    rem /= 4;
                }
                if (lv[site] != 1) continue;
                auto lv2 = lv;
                lv2[site] = i;
                const std::size_t s2 = m.scheme.foerster_index(lv2);
                // s = |...1...>, s2 = |...i...>: sigma_{1i} has element (s, s2)
                x.x_plus(s, s2) += 1.0;
                x.x_plus(s2, s) += 1.0;
                x.x_minus(s2, s) += I;
                x.x_minus(s, s2) += -I;
            }
            m.x_ops.push_back(std::move(x));
        }
    }
    return m;
}

std::vector<Matrix> radiative_dissipator(const LevelScheme& scheme, double gamma_r) {
    if (gamma_r < 0.0) throw ConfigError("gamma_r must be >= 0");
    std::vector<Matrix> ops;
    if (gamma_r == 0.0) return ops;
    if (scheme.kind == SchemeKind::Foerster) {
        const std::size_t dim = scheme.dim;
        std::vector<int> lv(scheme.n_sites, 0);
        for (std::size_t site = 0; site < scheme.n_sites; ++site) {
            for (int i : {2, 3}) {
                Matrix L = Matrix::Zero(dim, dim);
                for (std::size_t s = 0; s < dim; ++s) {
                    std::size_t rem = s;
                    for (std::size_t l = scheme.n_sites; l-- > 0;) {
                        lv[l] = static_cast<int>(rem % 4);
                        rem /= 4;
                    }
                    if (lv[site] != i) continue;
                    auto lv2 = lv;
                    lv2[site] = 1;
                    L(scheme.foerster_index(lv2), s) = 1.0;
                }
                ops.push_back(std::move(L));
            }
        }
        return ops;
    }
    for (std::size_t l = 0; l < scheme.n_sites; ++l) {
        for (std::size_t level : {2u, 3u}) {
            Matrix L = Matrix::Zero(scheme.dim, scheme.dim);
            L(scheme.dexter_index(l, 1), scheme.dexter_index(l, level)) = 1.0;
            ops.push_back(std::move(L));
        }
    }
    return ops;
}

DressedBasis dressed_basis() {
    DressedBasis b;
    b.minus = Vector::Zero(3);
    b.plus = Vector::Zero(3);
    b.dark = Vector::Zero(3);
    const double s2 = std::sqrt(2.0);
    b.minus << -s2 / 2.0, 0.5, 0.5;
    b.plus << s2 / 2.0, 0.5, 0.5;
    b.dark << 0.0, 1.0 / s2, -1.0 / s2;
    return b;
}

} // namespace vchain
