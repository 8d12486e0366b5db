#pragma once

#include <string>
#include <vector>

#include "vchain/bath.hpp"
#include "vchain/system_model.hpp"

namespace vchain {

enum class Scenario {
    Single,
    ChainDexterSingle,
    ChainDexterAll,
    ChainFoerster,
    Spectrum,
    CompareEngines,
    Sweep
};

enum class EngineChoice { Polaron, Heisenberg, Both };

struct NumericsConfig {
    double dt = 0.01;              // polaron engine step, ps
    double heisenberg_dt = 0.002;  // Heisenberg engine step, ps
    double t_end = 30000.0;        // ps
    std::size_t n_tau = 10001;     // tau-grid nodes (dtau = tau_max / (n_tau - 1))
    double tau_max = 20.0;         // ps
    std::size_t n_k = 1000;
    std::size_t sample_every = 100;
    double kernel_tol = 1e-8;
    double steady_window = 2000.0;  // ps
    double steady_tol = 1e-3;
};

struct FlagsConfig {
    bool apply_polaron_shift = true;
    bool site_diagonal_bath = true;
    bool ablate_sigma23 = false;
    double intraband_ratio = 0.0;
};

struct OutputConfig {
    std::string directory = "out";
    bool emit_svg = false;
    bool emit_rho_snapshots = false;
};

struct ChainConfig {
    std::size_t n_sites = 2;
    double f = 0.1;  // interdot amplitude, 1/ps
};

struct DecayConfig {
    double gamma_r_per_ns = 0.0;  // radiative rate, 1/ns
};

struct SweepAxis {
    std::string path;  // dotted config path, e.g. "drive.rabi"
    std::vector<double> values;
};

struct DriveConfig {
    double rabi = 0.1;            // 1/ps
    double detuning2_mev = 0.0;   // hbar * Delta_2
    double detuning3_mev = -1.0;  // hbar * Delta_3; delta_eps = detuning3 - detuning2
};

struct RunConfig {
    Scenario scenario = Scenario::Single;
    BathSpec bath;
    DriveConfig drive;
    ChainConfig chain;
    DecayConfig decay;
    EngineChoice engine = EngineChoice::Polaron;
    NumericsConfig numerics;
    FlagsConfig flags;
    OutputConfig output;
    std::vector<SweepAxis> sweep_axes;

    DriveSpec drive_spec() const;     // converted to internal 1/ps units
    double gamma_r_per_ps() const;
    void validate() const;
};

RunConfig parse_config(const std::string& json_text);
// Fully resolved snapshot with every default expanded; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

std::vector<std::string> preset_names();
RunConfig preset_config(const std::string& name);

// Applies a JSON document on top of an existing config (used for presets +
// user overrides); unknown keys are rejected.
RunConfig parse_config_over(const RunConfig& base, const std::string& json_text);

// Sets one numeric leaf (dotted path, e.g. "drive.rabi") on a copy of the
// config; used by sweep expansion. Unknown paths are rejected.
RunConfig apply_config_value(const RunConfig& base, const std::string& path, double value);

// 64-bit FNV-1a hash of the resolved config snapshot, as a hex string.
std::string config_hash(const RunConfig& config);

} // namespace vchain
