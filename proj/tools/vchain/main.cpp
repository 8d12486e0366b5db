#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "vchain/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw vchain::ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_error(const std::string& type, const std::string& message) {
    nlohmann::ordered_json err = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump(2) << std::endl;
}

vchain::RunConfig load_config(const std::string& config_path, const std::string& preset,
                              const std::string& out_dir) {
    vchain::RunConfig cfg;
    if (!preset.empty()) cfg = vchain::preset_config(preset);
    if (!config_path.empty()) {
        std::string text = read_file(config_path);
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) text = "{}";
        cfg = vchain::parse_config_over(cfg, text);
    }
    if (config_path.empty() && preset.empty())
        throw vchain::ConfigError("provide a config file and/or --preset");
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vchain: driven V-type emitter and chain-transport simulator"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir;
    bool svg = false;

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("config", config_path, "JSON config file");
    run->add_option("--preset", preset, "scenario preset")
        ->check(CLI::IsMember(vchain::preset_names()));
    run->add_option("--out", out_dir, "output directory");
    run->add_flag("--svg", svg, "also emit plot.svg");

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("config", sweep_config, "JSON config file with sweep axes")->required();
    sweep->add_option("--out", out_dir, "output directory");

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "compare two run directories");
    compare->add_option("dirA", dir_a)->required();
    compare->add_option("dirB", dir_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            vchain::RunConfig cfg = load_config(config_path, preset, out_dir);
            if (svg) cfg.output.emit_svg = true;
            vchain::run_scenario(cfg, cfg.output.directory);
            std::cout << "wrote " << cfg.output.directory << std::endl;
        } else if (sweep->parsed()) {
            vchain::RunConfig cfg = vchain::parse_config(read_file(sweep_config));
            if (!out_dir.empty()) cfg.output.directory = out_dir;
            vchain::run_sweep(cfg, cfg.output.directory);
            std::cout << "wrote " << cfg.output.directory << "/manifest.json" << std::endl;
        } else if (compare->parsed()) {
            const vchain::CompareResult res = vchain::compare_directories(dir_a, dir_b);
            nlohmann::ordered_json out;
            out["max_abs_diff"] = res.max_abs_diff;
            nlohmann::ordered_json per = nlohmann::ordered_json::object();
            for (const auto& [name, d] : res.per_channel)
                per[name] = {{"max_abs_diff", d.max_abs_diff}, {"t_at_max", d.t_at_max}};
            out["per_channel"] = per;
            std::cout << out.dump(2) << std::endl;
        }
    } catch (const vchain::ConfigError& e) {
        print_error("config", e.what());
        return kExitConfig;
    } catch (const vchain::NumericalError& e) {
        print_error("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
