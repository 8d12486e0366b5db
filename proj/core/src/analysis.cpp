#include "vchain/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "vchain/errors.hpp"

namespace vchain {

int TimeSeries::channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < channel_names.size(); ++i)
        if (channel_names[i] == name) return static_cast<int>(i);
    return -1;
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
    const int i = channel_index(name);
    if (i < 0) throw ConfigError("unknown channel: " + name);
    return channels[static_cast<std::size_t>(i)];
}

void TimeSeries::add_channel(const std::string& name) {
    channel_names.push_back(name);
    channels.emplace_back();
}

void TimeSeries::push_sample(double time, const std::vector<double>& values) {
    if (values.size() != channels.size())
        throw ConfigError("sample size does not match channel count");
    t.push_back(time);
    for (std::size_t i = 0; i < values.size(); ++i) channels[i].push_back(values[i]);
}

namespace {

std::string site_prefix(const LevelScheme& scheme, std::size_t site) {
    if (scheme.n_sites == 1) return "";
    return "s" + std::to_string(site + 1) + "_";
}

} // namespace

std::vector<std::string> observable_channel_names(const LevelScheme& scheme) {
    std::vector<std::string> names;
    for (std::size_t l = 0; l < scheme.n_sites; ++l) {
        const std::string p = site_prefix(scheme, l);
        if (scheme.kind == SchemeKind::Foerster) names.push_back("occ_" + p + "0");
        for (int i = 1; i <= 3; ++i) names.push_back("occ_" + p + std::to_string(i));
    }
    for (std::size_t l = 0; l < scheme.n_sites; ++l) {
        const std::string p = site_prefix(scheme, l);
        for (const char* pair : {"12", "13", "23"}) {
            names.push_back("re_rho_" + p + pair);
            names.push_back("im_rho_" + p + pair);
        }
    }
    return names;
}

namespace {

// Reduced single-site 4x4 density matrix of a Foerster product-space state.
Eigen::Matrix4cd foerster_site_reduced(const Matrix& rho, const LevelScheme& scheme,
                                       std::size_t site) {
    Eigen::Matrix4cd red = Eigen::Matrix4cd::Zero();
    std::size_t stride = 1;  // weight of this site's digit in the basis index
    for (std::size_t l = site + 1; l < scheme.n_sites; ++l) stride *= 4;
    const std::size_t dim = scheme.dim;
    for (std::size_t s = 0; s < dim; ++s) {
        const std::size_t a = (s / stride) % 4;
        for (int b = 0; b < 4; ++b) {
            const std::size_t s2 = s + (static_cast<std::size_t>(b) - a) * stride;
            red(static_cast<int>(a), b) += rho(s, s2);
        }
    }
    return red;
}

} // namespace

std::vector<double> extract_observables(const Matrix& rho, const LevelScheme& scheme) {
    std::vector<double> out;
    if (scheme.kind == SchemeKind::Foerster) {
        std::vector<Eigen::Matrix4cd> reduced;
        for (std::size_t l = 0; l < scheme.n_sites; ++l)
            reduced.push_back(foerster_site_reduced(rho, scheme, l));
        for (const auto& r : reduced)
            for (int i = 0; i < 4; ++i) out.push_back(r(i, i).real());
        const std::pair<int, int> pairs[] = {{1, 2}, {1, 3}, {2, 3}};
        for (const auto& r : reduced) {
            for (auto [a, b] : pairs) {
                out.push_back(r(a, b).real());
                out.push_back(r(a, b).imag());
            }
        }
        return out;
    }
    for (std::size_t l = 0; l < scheme.n_sites; ++l)
        for (std::size_t i = 1; i <= 3; ++i) {
            const std::size_t a = scheme.dexter_index(l, i);
            out.push_back(rho(a, a).real());
        }
    const std::pair<std::size_t, std::size_t> pairs[] = {{1, 2}, {1, 3}, {2, 3}};
    for (std::size_t l = 0; l < scheme.n_sites; ++l)
        for (auto [i, j] : pairs) {
            const auto c = rho(scheme.dexter_index(l, i), scheme.dexter_index(l, j));
            out.push_back(c.real());
            out.push_back(c.imag());
        }
    return out;
}

void append_dressed_populations(TimeSeries& series) {
    if (series.rho_snapshots.size() != series.n_samples())
        throw ConfigError("dressed populations require retained rho snapshots");
    if (!series.rho_snapshots.empty() && series.rho_snapshots[0].rows() != 3)
        throw ConfigError("dressed populations are defined for the single emitter only");
    const DressedBasis basis = dressed_basis();
    series.add_channel("rho_mm");
    series.add_channel("rho_pp");
    series.add_channel("rho_dd");
    auto& mm = series.channels[series.channels.size() - 3];
    auto& pp = series.channels[series.channels.size() - 2];
    auto& dd = series.channels[series.channels.size() - 1];
    for (const auto& rho : series.rho_snapshots) {
        mm.push_back((basis.minus.adjoint() * rho * basis.minus)(0).real());
        pp.push_back((basis.plus.adjoint() * rho * basis.plus)(0).real());
        dd.push_back((basis.dark.adjoint() * rho * basis.dark)(0).real());
    }
}

TransferMetrics transfer_metrics(const TimeSeries& series, const LevelScheme& scheme,
                                 double threshold) {
    TransferMetrics m;
    for (std::size_t l = 0; l < scheme.n_sites; ++l) {
        const std::string name = "occ_" + site_prefix(scheme, l) + "3";
        const auto& occ = series.channel(name);
        std::optional<double> th;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (occ[i] >= threshold) {
                th = series.t[i];
                break;
            }
        m.t_half.push_back(th);
        m.final_detuned_occupation.push_back(occ.empty() ? 0.0 : occ.back());
    }
    m.last_site_inversion = m.final_detuned_occupation.empty() ? 0.0
                                                               : m.final_detuned_occupation.back();
    return m;
}

CompareResult compare_engines(const TimeSeries& a, const TimeSeries& b,
                              const std::vector<std::string>& channels) {
    if (a.t.empty() || b.t.empty()) throw ConfigError("empty series in comparison");
    const double lo = std::max(a.t.front(), b.t.front());
    const double hi = std::min(a.t.back(), b.t.back());
    if (lo > hi) throw ConfigError("series time ranges do not overlap");

    // evaluate on the coarser grid, interpolating the finer series linearly
    const bool a_coarser = a.t.size() <= b.t.size();
    const TimeSeries& coarse = a_coarser ? a : b;
    const TimeSeries& fine = a_coarser ? b : a;

    auto interp = [](const std::vector<double>& ts, const std::vector<double>& ys, double t) {
        const auto it = std::lower_bound(ts.begin(), ts.end(), t);
        if (it == ts.begin()) return ys.front();
        if (it == ts.end()) return ys.back();
        const std::size_t i = static_cast<std::size_t>(it - ts.begin());
        const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
        return (1.0 - w) * ys[i - 1] + w * ys[i];
    };

    CompareResult res;
    for (const auto& name : channels) {
        const auto& yc = coarse.channel(name);
        const auto& yf = fine.channel(name);
        ChannelDiff d;
        for (std::size_t i = 0; i < coarse.t.size(); ++i) {
            const double t = coarse.t[i];
            if (t < lo || t > hi) continue;
            const double diff = std::abs(yc[i] - interp(fine.t, yf, t));
            if (diff > d.max_abs_diff) {
                d.max_abs_diff = diff;
                d.t_at_max = t;
            }
        }
        res.max_abs_diff = std::max(res.max_abs_diff, d.max_abs_diff);
        res.per_channel[name] = d;
    }
    return res;
}

} // namespace vchain
