#pragma once

#include <filesystem>
#include <string>

#include "vchain/analysis.hpp"
#include "vchain/config.hpp"

namespace vchain {

// Executes one scenario and writes its artifact set (timeseries.csv,
// summary.json, resolved config.json, optional plot.svg / spectrum.csv) into
// out_dir. Throws ConfigError / NumericalError on failure; no partial
// artifacts are left behind (all writes are atomic).
void run_scenario(const RunConfig& config, const std::filesystem::path& out_dir);

// Expands the sweep grid, runs every point into out_dir/point_NNN, and writes
// manifest.json. Per-point failures are recorded in the manifest without
// aborting the sweep. Parallelism is capped by the VCHAIN_THREADS env var.
void run_sweep(const RunConfig& config, const std::filesystem::path& out_dir);

// Compares timeseries.csv of two run directories over their common channels.
CompareResult compare_directories(const std::filesystem::path& dir_a,
                                  const std::filesystem::path& dir_b);

std::size_t thread_budget();  // from VCHAIN_THREADS, default = hardware concurrency

} // namespace vchain
