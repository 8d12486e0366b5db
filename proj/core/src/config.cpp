#include "vchain/config.hpp"

#include <cmath>
#include <cstdint>
#include <json.hpp>
#include <sstream>

#include "vchain/constants.hpp"

namespace vchain {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(path + ": unknown key \"" + key + "\"");
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError(path + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path + ": expected a string");
    return j.get<std::string>();
}

Scenario parse_scenario(const std::string& s, const std::string& path) {
    if (s == "single") return Scenario::Single;
    if (s == "chain_dexter_single") return Scenario::ChainDexterSingle;
    if (s == "chain_dexter_all") return Scenario::ChainDexterAll;
    if (s == "chain_foerster") return Scenario::ChainFoerster;
    if (s == "spectrum") return Scenario::Spectrum;
    if (s == "compare_engines") return Scenario::CompareEngines;
    if (s == "sweep") return Scenario::Sweep;
    throw ConfigError(path + ": unknown scenario \"" + s + "\"");
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Single: return "single";
        case Scenario::ChainDexterSingle: return "chain_dexter_single";
        case Scenario::ChainDexterAll: return "chain_dexter_all";
        case Scenario::ChainFoerster: return "chain_foerster";
        case Scenario::Spectrum: return "spectrum";
        case Scenario::CompareEngines: return "compare_engines";
        case Scenario::Sweep: return "sweep";
    }
    return "single";
}

BathKind parse_bath_kind(const std::string& s, const std::string& path) {
    if (s == "microscopic") return BathKind::Microscopic;
    if (s == "superohmic") return BathKind::ParametricSuperohmic;
    if (s == "gaussian") return BathKind::Gaussian;
    if (s == "lorentzian") return BathKind::Lorentzian;
    throw ConfigError(path + ": unknown bath kind \"" + s + "\"");
}

std::string bath_kind_name(BathKind k) {
    switch (k) {
        case BathKind::Microscopic: return "microscopic";
        case BathKind::ParametricSuperohmic: return "superohmic";
        case BathKind::Gaussian: return "gaussian";
        case BathKind::Lorentzian: return "lorentzian";
    }
    return "microscopic";
}

EngineChoice parse_engine(const std::string& s, const std::string& path) {
    if (s == "polaron") return EngineChoice::Polaron;
    if (s == "heisenberg") return EngineChoice::Heisenberg;
    if (s == "both") return EngineChoice::Both;
    throw ConfigError(path + ": unknown engine \"" + s + "\"");
}

std::string engine_name(EngineChoice e) {
    switch (e) {
        case EngineChoice::Polaron: return "polaron";
        case EngineChoice::Heisenberg: return "heisenberg";
        case EngineChoice::Both: return "both";
    }
    return "polaron";
}

void apply_bath(BathSpec& bath, const json& j) {
    check_keys(j, "bath", {"kind", "temperature", "coupling_scale", "microscopic", "parametric"});
    if (j.contains("kind")) bath.kind = parse_bath_kind(get_string(j["kind"], "bath.kind"), "bath.kind");
    if (j.contains("temperature")) bath.temperature_K = get_number(j["temperature"], "bath.temperature");
    if (j.contains("coupling_scale"))
        bath.coupling_scale = get_number(j["coupling_scale"], "bath.coupling_scale");
    if (j.contains("microscopic")) {
        const json& m = j["microscopic"];
        check_keys(m, "bath.microscopic",
                   {"sound_velocity_m_s", "mass_density_kg_m3", "deformation_potential_ev",
                    "effective_mass_kg", "confinement_energy_mev"});
        auto& p = bath.microscopic;
        if (m.contains("sound_velocity_m_s"))
            p.sound_velocity_m_s = get_number(m["sound_velocity_m_s"], "bath.microscopic.sound_velocity_m_s");
        if (m.contains("mass_density_kg_m3"))
            p.mass_density_kg_m3 = get_number(m["mass_density_kg_m3"], "bath.microscopic.mass_density_kg_m3");
        if (m.contains("deformation_potential_ev"))
            p.deformation_potential_eV =
                get_number(m["deformation_potential_ev"], "bath.microscopic.deformation_potential_ev");
        if (m.contains("effective_mass_kg"))
            p.effective_mass_kg = get_number(m["effective_mass_kg"], "bath.microscopic.effective_mass_kg");
        if (m.contains("confinement_energy_mev"))
            p.confinement_energy_meV =
                get_number(m["confinement_energy_mev"], "bath.microscopic.confinement_energy_mev");
    }
    if (j.contains("parametric")) {
        const json& p = j["parametric"];
        check_keys(p, "bath.parametric", {"alpha", "cutoff_mev"});
        if (p.contains("alpha")) bath.parametric.alpha = get_number(p["alpha"], "bath.parametric.alpha");
        if (p.contains("cutoff_mev"))
            bath.parametric.cutoff_energy_meV = get_number(p["cutoff_mev"], "bath.parametric.cutoff_mev");
    }
}

void apply_document(RunConfig& c, const json& j) {
    check_keys(j, "(root)", {"scenario", "bath", "drive", "chain", "decay", "engine", "numerics",
                             "flags", "output", "sweep"});
    if (j.contains("scenario"))
        c.scenario = parse_scenario(get_string(j["scenario"], "scenario"), "scenario");
    if (j.contains("bath")) apply_bath(c.bath, j["bath"]);
    if (j.contains("drive")) {
        const json& d = j["drive"];
        check_keys(d, "drive", {"rabi", "detuning2_mev", "detuning3_mev"});
        if (d.contains("rabi")) c.drive.rabi = get_number(d["rabi"], "drive.rabi");
        if (d.contains("detuning2_mev"))
            c.drive.detuning2_mev = get_number(d["detuning2_mev"], "drive.detuning2_mev");
        if (d.contains("detuning3_mev"))
            c.drive.detuning3_mev = get_number(d["detuning3_mev"], "drive.detuning3_mev");
    }
    if (j.contains("chain")) {
        const json& ch = j["chain"];
        check_keys(ch, "chain", {"n_sites", "f"});
        if (ch.contains("n_sites")) c.chain.n_sites = get_count(ch["n_sites"], "chain.n_sites");
        if (ch.contains("f")) c.chain.f = get_number(ch["f"], "chain.f");
    }
    if (j.contains("decay")) {
        const json& d = j["decay"];
        check_keys(d, "decay", {"gamma_r_per_ns"});
        if (d.contains("gamma_r_per_ns"))
            c.decay.gamma_r_per_ns = get_number(d["gamma_r_per_ns"], "decay.gamma_r_per_ns");
    }
    if (j.contains("engine")) c.engine = parse_engine(get_string(j["engine"], "engine"), "engine");
    if (j.contains("numerics")) {
        const json& n = j["numerics"];
        check_keys(n, "numerics",
                   {"dt", "heisenberg_dt", "t_end", "n_tau", "tau_max", "n_k", "sample_every",
                    "kernel_tol", "steady_window", "steady_tol"});
        auto& num = c.numerics;
        if (n.contains("dt")) num.dt = get_number(n["dt"], "numerics.dt");
        if (n.contains("heisenberg_dt"))
            num.heisenberg_dt = get_number(n["heisenberg_dt"], "numerics.heisenberg_dt");
        if (n.contains("t_end")) num.t_end = get_number(n["t_end"], "numerics.t_end");
        if (n.contains("n_tau")) num.n_tau = get_count(n["n_tau"], "numerics.n_tau");
        if (n.contains("tau_max")) num.tau_max = get_number(n["tau_max"], "numerics.tau_max");
        if (n.contains("n_k")) num.n_k = get_count(n["n_k"], "numerics.n_k");
        if (n.contains("sample_every"))
            num.sample_every = get_count(n["sample_every"], "numerics.sample_every");
        if (n.contains("kernel_tol")) num.kernel_tol = get_number(n["kernel_tol"], "numerics.kernel_tol");
        if (n.contains("steady_window"))
            num.steady_window = get_number(n["steady_window"], "numerics.steady_window");
        if (n.contains("steady_tol")) num.steady_tol = get_number(n["steady_tol"], "numerics.steady_tol");
    }
    if (j.contains("flags")) {
        const json& f = j["flags"];
        check_keys(f, "flags",
                   {"apply_polaron_shift", "site_diagonal_bath", "ablate_sigma23", "intraband_ratio"});
        if (f.contains("apply_polaron_shift"))
            c.flags.apply_polaron_shift = get_bool(f["apply_polaron_shift"], "flags.apply_polaron_shift");
        if (f.contains("site_diagonal_bath"))
            c.flags.site_diagonal_bath = get_bool(f["site_diagonal_bath"], "flags.site_diagonal_bath");
        if (f.contains("ablate_sigma23"))
            c.flags.ablate_sigma23 = get_bool(f["ablate_sigma23"], "flags.ablate_sigma23");
        if (f.contains("intraband_ratio"))
            c.flags.intraband_ratio = get_number(f["intraband_ratio"], "flags.intraband_ratio");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        check_keys(o, "output", {"directory", "emit_svg", "emit_rho_snapshots"});
        if (o.contains("directory")) c.output.directory = get_string(o["directory"], "output.directory");
        if (o.contains("emit_svg")) c.output.emit_svg = get_bool(o["emit_svg"], "output.emit_svg");
        if (o.contains("emit_rho_snapshots"))
            c.output.emit_rho_snapshots = get_bool(o["emit_rho_snapshots"], "output.emit_rho_snapshots");
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        check_keys(s, "sweep", {"axes"});
        if (s.contains("axes")) {
            if (!s["axes"].is_array()) throw ConfigError("sweep.axes: expected an array");
            c.sweep_axes.clear();
            std::size_t idx = 0;
            for (const auto& a : s["axes"]) {
                const std::string p = "sweep.axes[" + std::to_string(idx) + "]";
                check_keys(a, p, {"path", "values"});
                SweepAxis axis;
                if (!a.contains("path") || !a.contains("values"))
                    throw ConfigError(p + ": needs \"path\" and \"values\"");
                axis.path = get_string(a["path"], p + ".path");
                if (!a["values"].is_array() || a["values"].empty())
                    throw ConfigError(p + ".values: expected a non-empty array");
                for (const auto& v : a["values"]) axis.values.push_back(get_number(v, p + ".values"));
                c.sweep_axes.push_back(std::move(axis));
                ++idx;
            }
        }
    }
}

} // namespace

DriveSpec RunConfig::drive_spec() const {
    DriveSpec d;
    d.rabi = drive.rabi;
    d.detuning2 = drive.detuning2_mev / hbar_meV_ps;
    d.detuning3 = drive.detuning3_mev / hbar_meV_ps;
    return d;
}

double RunConfig::gamma_r_per_ps() const { return decay.gamma_r_per_ns * 1e-3; }

void RunConfig::validate() const {
    bath.validate();
    if (bath.temperature_K < 0.0) throw ConfigError("bath.temperature: must be >= 0");
    if (drive.rabi < 0.0) throw ConfigError("drive.rabi: must be >= 0");
    if (numerics.dt <= 0.0) throw ConfigError("numerics.dt: must be > 0");
    if (numerics.heisenberg_dt <= 0.0) throw ConfigError("numerics.heisenberg_dt: must be > 0");
    if (numerics.t_end <= 0.0) throw ConfigError("numerics.t_end: must be > 0");
    if (numerics.n_tau < 3) throw ConfigError("numerics.n_tau: must be >= 3");
    if (numerics.tau_max <= 0.0) throw ConfigError("numerics.tau_max: must be > 0");
    if (numerics.sample_every == 0) throw ConfigError("numerics.sample_every: must be >= 1");
    if (numerics.kernel_tol <= 0.0) throw ConfigError("numerics.kernel_tol: must be > 0");
    if (decay.gamma_r_per_ns < 0.0) throw ConfigError("decay.gamma_r_per_ns: must be >= 0");
    if (flags.intraband_ratio < 0.0) throw ConfigError("flags.intraband_ratio: must be >= 0");
    const bool chain_scenario = scenario == Scenario::ChainDexterSingle ||
                                scenario == Scenario::ChainDexterAll ||
                                scenario == Scenario::ChainFoerster;
    if (chain_scenario && chain.n_sites < 2)
        throw ConfigError("chain.n_sites: chain scenarios require n_sites >= 2");
    if (scenario == Scenario::ChainFoerster && chain.n_sites > 3)
        throw ConfigError("chain.n_sites: Foerster chains support at most 3 sites");
    if (chain_scenario && engine != EngineChoice::Polaron)
        throw ConfigError("engine: chain scenarios support the polaron engine only");
    if (scenario == Scenario::Spectrum && engine == EngineChoice::Polaron)
        throw ConfigError("engine: the spectrum scenario requires the heisenberg engine");
    if (scenario == Scenario::CompareEngines && engine != EngineChoice::Both)
        throw ConfigError("engine: compare_engines requires engine \"both\"");
    if (scenario == Scenario::Sweep && sweep_axes.empty())
        throw ConfigError("sweep.axes: the sweep scenario needs at least one axis");
    if (sweep_axes.size() > 3) throw ConfigError("sweep.axes: at most 3 axes supported");
}

RunConfig parse_config(const std::string& json_text) {
    return parse_config_over(RunConfig{}, json_text);
}

RunConfig parse_config_over(const RunConfig& base, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    RunConfig c = base;
    apply_document(c, j);
    c.validate();
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["scenario"] = scenario_name(c.scenario);
    j["bath"] = {{"kind", bath_kind_name(c.bath.kind)},
                 {"temperature", c.bath.temperature_K},
                 {"coupling_scale", c.bath.coupling_scale},
                 {"microscopic",
                  {{"sound_velocity_m_s", c.bath.microscopic.sound_velocity_m_s},
                   {"mass_density_kg_m3", c.bath.microscopic.mass_density_kg_m3},
                   {"deformation_potential_ev", c.bath.microscopic.deformation_potential_eV},
                   {"effective_mass_kg", c.bath.microscopic.effective_mass_kg},
                   {"confinement_energy_mev", c.bath.microscopic.confinement_energy_meV}}},
                 {"parametric",
                  {{"alpha", c.bath.parametric.alpha},
                   {"cutoff_mev", c.bath.parametric.cutoff_energy_meV}}}};
    j["drive"] = {{"rabi", c.drive.rabi},
                  {"detuning2_mev", c.drive.detuning2_mev},
                  {"detuning3_mev", c.drive.detuning3_mev}};
    j["chain"] = {{"n_sites", c.chain.n_sites}, {"f", c.chain.f}};
    j["decay"] = {{"gamma_r_per_ns", c.decay.gamma_r_per_ns}};
    j["engine"] = engine_name(c.engine);
    j["numerics"] = {{"dt", c.numerics.dt},
                     {"heisenberg_dt", c.numerics.heisenberg_dt},
                     {"t_end", c.numerics.t_end},
                     {"n_tau", c.numerics.n_tau},
                     {"tau_max", c.numerics.tau_max},
                     {"n_k", c.numerics.n_k},
                     {"sample_every", c.numerics.sample_every},
                     {"kernel_tol", c.numerics.kernel_tol},
                     {"steady_window", c.numerics.steady_window},
                     {"steady_tol", c.numerics.steady_tol}};
    j["flags"] = {{"apply_polaron_shift", c.flags.apply_polaron_shift},
                  {"site_diagonal_bath", c.flags.site_diagonal_bath},
                  {"ablate_sigma23", c.flags.ablate_sigma23},
                  {"intraband_ratio", c.flags.intraband_ratio}};
    j["output"] = {{"directory", c.output.directory},
                   {"emit_svg", c.output.emit_svg},
                   {"emit_rho_snapshots", c.output.emit_rho_snapshots}};
    json axes = json::array();
    for (const auto& a : c.sweep_axes) axes.push_back({{"path", a.path}, {"values", a.values}});
    j["sweep"] = {{"axes", axes}};
    return j.dump(2);
}

std::vector<std::string> preset_names() {
    return {"fig3a", "fig2", "fig5", "fig6", "fig8", "fig9", "fig10", "fig11", "fig12"};
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;  // defaults already describe the baseline single-emitter run
    if (name == "fig3a") {
        c.scenario = Scenario::Single;
        c.numerics.t_end = 60000.0;
        c.numerics.sample_every = 100;
        c.numerics.steady_window = 5000.0;
    } else if (name == "fig2") {
        c.scenario = Scenario::Spectrum;
        c.engine = EngineChoice::Heisenberg;
        c.numerics.t_end = 100.0;
    } else if (name == "fig5" || name == "fig6") {
        c.scenario = Scenario::ChainDexterSingle;
        c.chain.n_sites = 4;
        c.chain.f = 0.1;
        if (name == "fig5") {
            c.numerics.t_end = 300000.0;
            c.numerics.sample_every = 1000;
            c.numerics.steady_window = 20000.0;
        } else {
            c.decay.gamma_r_per_ns = 0.1;
            c.numerics.t_end = 50000.0;
            c.numerics.sample_every = 500;
            c.numerics.steady_window = 5000.0;
        }
    } else if (name == "fig8") {
        c.scenario = Scenario::CompareEngines;
        c.engine = EngineChoice::Both;
        c.drive.rabi = 0.5;
        c.bath.coupling_scale = 2.5;
        c.numerics.t_end = 150.0;
        c.numerics.sample_every = 50;
        c.numerics.steady_window = 20.0;
        c.numerics.steady_tol = 0.05;
    } else if (name == "fig9" || name == "fig10") {
        c.scenario = Scenario::ChainDexterAll;
        c.chain.n_sites = 4;
        c.chain.f = 0.1;
        c.drive.rabi = 0.5;
        if (name == "fig10") c.drive.detuning3_mev = 0.0;
        c.numerics.t_end = 40000.0;
        c.numerics.sample_every = 500;
        c.numerics.steady_window = 4000.0;
    } else if (name == "fig11") {
        c.scenario = Scenario::Single;
        c.engine = EngineChoice::Heisenberg;
        c.drive.rabi = 0.5;
        c.bath.coupling_scale = 2.5;
        c.flags.intraband_ratio = 0.1;
        c.numerics.t_end = 150.0;
        c.numerics.sample_every = 50;
        c.numerics.steady_window = 20.0;
        c.numerics.steady_tol = 0.05;
    } else if (name == "fig12") {
        c.scenario = Scenario::ChainFoerster;
        c.chain.n_sites = 2;
        c.chain.f = 0.1;
        c.numerics.t_end = 100000.0;
        c.numerics.sample_every = 1000;
        c.numerics.steady_window = 10000.0;
    } else {
        throw ConfigError("unknown preset \"" + name + "\"");
    }
    c.validate();
    return c;
}

RunConfig apply_config_value(const RunConfig& base, const std::string& path, double value) {
    json j = json::parse(serialize_config(base));
    std::string ptr = "/";
    for (char ch : path) ptr += (ch == '.') ? '/' : ch;
    const json::json_pointer jp(ptr);
    if (!j.contains(jp)) throw ConfigError("sweep path not found: " + path);
    if (!j.at(jp).is_number()) throw ConfigError("sweep path is not numeric: " + path);
    if (j.at(jp).is_number_integer() && std::floor(value) == value)
        j[jp] = static_cast<std::int64_t>(value);
    else
        j[jp] = value;
    RunConfig out = base;
    apply_document(out, j);
    out.validate();
    return out;
}

std::string config_hash(const RunConfig& config) {
    const std::string s = serialize_config(config);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

} // namespace vchain
