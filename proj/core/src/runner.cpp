#include "vchain/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "vchain/heisenberg_engine.hpp"
#include "vchain/io.hpp"
#include "vchain/polaron_engine.hpp"

namespace vchain {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

SystemModel build_model(const RunConfig& cfg, double polaron_factor, double shift) {
    const DriveSpec drive = cfg.drive_spec();
    SystemModel model;
    switch (cfg.scenario) {
        case Scenario::Single:
        case Scenario::Spectrum:
        case Scenario::CompareEngines:
            model = build_single(drive, polaron_factor, shift);
            break;
        case Scenario::ChainDexterSingle:
            model = build_dexter_single_chain(cfg.chain.n_sites, drive, cfg.chain.f,
                                              polaron_factor, shift);
            break;
        case Scenario::ChainDexterAll:
            model = build_dexter_all_chain(cfg.chain.n_sites, drive, cfg.chain.f, polaron_factor,
                                           shift);
            break;
        case Scenario::ChainFoerster:
            model = build_foerster_chain(cfg.chain.n_sites, drive, cfg.chain.f, polaron_factor,
                                         shift);
            break;
        case Scenario::Sweep:
            model = build_single(drive, polaron_factor, shift);
            break;
    }
    model.gamma_r = cfg.gamma_r_per_ps();
    model.ablate_sigma23 = cfg.flags.ablate_sigma23;
    return model;
}

TimeSeries run_polaron(const RunConfig& cfg, const CorrelationTables& tables, bool keep_rho) {
    const double shift = cfg.flags.apply_polaron_shift ? polaron_shift(cfg.bath) : 0.0;
    SystemModel model = build_model(cfg, tables.polaron_factor, shift);
    const KernelCache cache = precompute_kernel(model, tables, cfg.flags.site_diagonal_bath);
    EvolveOptions opts;
    opts.dt = cfg.numerics.dt;
    opts.sample_every = cfg.numerics.sample_every;
    opts.keep_rho = keep_rho;
    return evolve(model, cache, model.initial_state(), cfg.numerics.t_end, opts);
}

TimeSeries run_heisenberg(const RunConfig& cfg) {
    // the Heisenberg engine works with the bare (non-renormalized) Hamiltonian
    const SystemModel model = build_single(cfg.drive_spec(), 1.0, 0.0);
    const KGrid kgrid = build_kgrid(cfg.bath, cfg.numerics.n_k);
    HeisenbergOptions opts;
    opts.intraband_ratio = cfg.flags.intraband_ratio;
    opts.ablate_sigma23 = cfg.flags.ablate_sigma23;
    const double sample_interval = cfg.numerics.dt * static_cast<double>(cfg.numerics.sample_every);
    const std::size_t per = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(sample_interval / cfg.numerics.heisenberg_dt)));
    const HeisenbergState s0 =
        initial_heisenberg_state(model.initial_state(), kgrid.nodes.size());
    return evolve_heisenberg(model, kgrid, s0, cfg.numerics.t_end, cfg.numerics.heisenberg_dt,
                             per, opts);
}

json steady_to_json(const SteadyResult& steady) {
    json values = json::object();
    for (const auto& [name, value] : steady.values) values[name] = value;
    return {{"reached", steady.reached}, {"t_reached", steady.t_reached}, {"values", values}};
}

json metrics_to_json(const TransferMetrics& m) {
    json th = json::array();
    for (const auto& t : m.t_half) {
        if (t) th.push_back(*t);
        else th.push_back(nullptr);
    }
    return {{"t_half_ps", th},
            {"final_detuned_occupation", m.final_detuned_occupation},
            {"last_site_inversion", m.last_site_inversion}};
}

json invariants_to_json(const TimeSeries& series) {
    json inv = json::object();
    for (const auto& [key, value] : series.metadata)
        if (key != "engine" && key != "config_hash") inv[key] = std::stod(value);
    return inv;
}

// true when the steady ground occupations are site-uniform and dominant,
// i.e. no net excitation current flows along the chain
bool no_steady_current(const RunConfig& cfg, const SteadyResult& steady) {
    if (!steady.reached) return false;
    double lo = 1.0, hi = 0.0;
    for (std::size_t l = 1; l <= cfg.chain.n_sites; ++l) {
        const std::string p = "s" + std::to_string(l) + "_";
        const double g = steady.values.at("occ_" + p + "1");
        lo = std::min(lo, g);
        hi = std::max(hi, g);
        if (g <= steady.values.at("occ_" + p + "2") || g <= steady.values.at("occ_" + p + "3"))
            return false;
    }
    return hi - lo < 0.02;
}

void run_spectrum_scenario(const RunConfig& cfg, const fs::path& out_dir, json& summary) {
    const CorrelationTables tables = build_correlation_tables(
        cfg.bath, cfg.numerics.tau_max, cfg.numerics.n_tau, cfg.numerics.kernel_tol);
    const KGrid kgrid = build_kgrid(cfg.bath, cfg.numerics.n_k);
    const DriveSpec drive_off{0.0, cfg.drive_spec().detuning2, cfg.drive_spec().detuning3};
    const SystemModel model = build_single(drive_off, 1.0, 0.0);

    SpectrumConfig sc;
    sc.t_end = cfg.numerics.t_end;
    sc.dt = cfg.numerics.heisenberg_dt;
    const Spectrum v = absorption_spectrum(model, kgrid, sc);
    const Spectrum ibm = ibm_reference_spectrum(tables, v.omega);

    std::string csv = "omega_per_ps,alpha_v,alpha_ibm\n";
    for (std::size_t i = 0; i < v.omega.size(); ++i)
        csv += format_sig12(v.omega[i]) + "," + format_sig12(v.alpha[i]) + "," +
               format_sig12(ibm.alpha[i]) + "\n";
    write_text_atomic(out_dir / "spectrum.csv", csv);

    const auto v_peaks = local_maxima(v.alpha);
    const auto ibm_peaks = local_maxima(ibm.alpha);
    std::size_t ibm_argmax = 0;
    for (std::size_t i = 1; i < ibm.alpha.size(); ++i)
        if (ibm.alpha[i] > ibm.alpha[ibm_argmax]) ibm_argmax = i;
    json vp = json::array(), ip = json::array();
    for (auto i : v_peaks) vp.push_back(v.omega[i]);
    for (auto i : ibm_peaks) ip.push_back(ibm.omega[i]);
    summary["spectrum"] = {{"v_peak_omegas", vp},
                           {"v_peak_count", v_peaks.size()},
                           {"ibm_peak_omegas", ip},
                           {"ibm_global_max_omega", ibm.omega[ibm_argmax]}};
}

std::string rho_snapshot_csv(const TimeSeries& series) {
    std::ostringstream out;
    const auto dim = series.rho_snapshots.empty() ? 0 : series.rho_snapshots[0].rows();
    out << "t_ps";
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b)
            out << ",re_" << a + 1 << '_' << b + 1 << ",im_" << a + 1 << '_' << b + 1;
    out << '\n';
    for (std::size_t i = 0; i < series.rho_snapshots.size(); ++i) {
        out << format_sig12(series.t[i]);
        const auto& rho = series.rho_snapshots[i];
        for (Eigen::Index a = 0; a < dim; ++a)
            for (Eigen::Index b = 0; b < dim; ++b)
                out << ',' << format_sig12(rho(a, b).real()) << ','
                    << format_sig12(rho(a, b).imag());
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> occupation_channels(const TimeSeries& series) {
    std::vector<std::string> occ;
    for (const auto& name : series.channel_names)
        if (name.rfind("occ_", 0) == 0) occ.push_back(name);
    return occ;
}

} // namespace

void run_scenario(const RunConfig& config, const fs::path& out_dir) {
    config.validate();
    if (config.scenario == Scenario::Sweep) {
        run_sweep(config, out_dir);
        return;
    }
    fs::create_directories(out_dir);
    const std::string hash = config_hash(config);

    json summary;
    summary["config_hash"] = hash;
    summary["config"] = json::parse(serialize_config(config));

    if (config.scenario == Scenario::Spectrum) {
        run_spectrum_scenario(config, out_dir, summary);
        write_text_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
        write_text_atomic(out_dir / "config.json", serialize_config(config) + "\n");
        return;
    }

    const CorrelationTables tables = build_correlation_tables(
        config.bath, config.numerics.tau_max, config.numerics.n_tau, config.numerics.kernel_tol);

    const bool single = config.scenario == Scenario::Single;
    const bool chain = config.scenario == Scenario::ChainDexterSingle ||
                       config.scenario == Scenario::ChainDexterAll ||
                       config.scenario == Scenario::ChainFoerster;

    TimeSeries primary;
    std::optional<TimeSeries> secondary;
    if (config.engine == EngineChoice::Heisenberg) {
        primary = run_heisenberg(config);
    } else {
        const bool keep_rho = single || config.output.emit_rho_snapshots;
        primary = run_polaron(config, tables, keep_rho);
        if (single && config.engine == EngineChoice::Polaron)
            append_dressed_populations(primary);
        if (config.engine == EngineChoice::Both) secondary = run_heisenberg(config);
    }
    primary.metadata["config_hash"] = hash;

    const SteadyResult steady =
        find_steady_state(primary, config.numerics.steady_window, config.numerics.steady_tol);
    summary["engine"] = primary.metadata.at("engine");
    summary["steady_state"] = steady_to_json(steady);
    summary["invariants"] = invariants_to_json(primary);

    if (chain || single) {
        LevelScheme scheme;
        scheme.kind = chain ? (config.scenario == Scenario::ChainDexterSingle
                                   ? SchemeKind::DexterSingle
                                   : (config.scenario == Scenario::ChainDexterAll
                                          ? SchemeKind::DexterAll
                                          : SchemeKind::Foerster))
                            : SchemeKind::Single;
        scheme.n_sites = chain ? config.chain.n_sites : 1;
        summary["transfer_metrics"] = metrics_to_json(transfer_metrics(primary, scheme));
    }
    if (chain && config.scenario != Scenario::ChainFoerster)
        summary["no_steady_current"] = no_steady_current(config, steady);

    if (secondary) {
        secondary->metadata["config_hash"] = hash;
        const CompareResult cmp =
            compare_engines(primary, *secondary, occupation_channels(primary));
        json per = json::object();
        for (const auto& [name, d] : cmp.per_channel)
            per[name] = {{"max_abs_diff", d.max_abs_diff}, {"t_at_max", d.t_at_max}};
        summary["engine_comparison"] = {{"max_abs_diff", cmp.max_abs_diff}, {"per_channel", per}};
        write_timeseries_csv(out_dir / "timeseries_heisenberg.csv", *secondary);
    }

    write_timeseries_csv(out_dir / "timeseries.csv", primary);
    if (config.output.emit_rho_snapshots && !primary.rho_snapshots.empty())
        write_text_atomic(out_dir / "rho_snapshots.csv", rho_snapshot_csv(primary));
    if (config.output.emit_svg) {
        const std::string svg =
            render_svg(primary, occupation_channels(primary), "occupations [" + hash + "]");
        write_text_atomic(out_dir / "plot.svg", svg);
    }
    write_text_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
    write_text_atomic(out_dir / "config.json", serialize_config(config) + "\n");
}

std::size_t thread_budget() {
    if (const char* env = std::getenv("VCHAIN_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void run_sweep(const RunConfig& config, const fs::path& out_dir) {
    config.validate();
    if (config.sweep_axes.empty()) throw ConfigError("sweep.axes: no axes given");

    std::size_t total = 1;
    for (const auto& axis : config.sweep_axes) total *= axis.values.size();

    struct Point {
        RunConfig cfg;
        json params;
        fs::path dir;
        std::string status = "pending";
        std::string error;
    };
    std::vector<Point> points;
    points.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Point p;
        p.cfg = config;
        if (p.cfg.scenario == Scenario::Sweep) p.cfg.scenario = Scenario::Single;
        p.cfg.sweep_axes.clear();
        p.params = json::object();
        std::size_t rem = idx;
        try {
            for (const auto& axis : config.sweep_axes) {
                const double v = axis.values[rem % axis.values.size()];
                rem /= axis.values.size();
                p.cfg = apply_config_value(p.cfg, axis.path, v);
                p.params[axis.path] = v;
            }
        } catch (const std::exception& e) {
            p.status = "error";
            p.error = e.what();
        }
        char name[32];
        std::snprintf(name, sizeof(name), "point_%03zu", idx);
        p.dir = out_dir / name;
        p.cfg.output.directory = p.dir.string();
        points.push_back(std::move(p));
    }

    fs::create_directories(out_dir);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            if (points[i].status == "error") continue;
            try {
                run_scenario(points[i].cfg, points[i].dir);
                points[i].status = "ok";
            } catch (const std::exception& e) {
                points[i].status = "error";
                points[i].error = e.what();
            }
        }
    };
    const std::size_t n_threads = std::min(thread_budget(), points.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    json rows = json::array();
    for (const auto& p : points) {
        json row = {{"dir", p.dir.filename().string()},
                    {"params", p.params},
                    {"status", p.status}};
        if (p.status == "ok") {
            std::ifstream in(p.dir / "summary.json");
            row["summary"] = json::parse(in);
        } else {
            row["error"] = p.error;
        }
        rows.push_back(std::move(row));
    }
    const json manifest = {{"config_hash", config_hash(config)},
                           {"grid_size", total},
                           {"points", rows}};
    write_text_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

CompareResult compare_directories(const fs::path& dir_a, const fs::path& dir_b) {
    const TimeSeries a = read_timeseries_csv(dir_a / "timeseries.csv");
    const TimeSeries b = read_timeseries_csv(dir_b / "timeseries.csv");
    std::vector<std::string> common;
    for (const auto& name : a.channel_names)
        if (b.channel_index(name) >= 0) common.push_back(name);
    if (common.empty()) throw ConfigError("no common channels between run directories");
    return compare_engines(a, b, common);
}

} // namespace vchain
