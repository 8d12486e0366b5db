#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vchain/system_model.hpp"
#include "vchain/timeseries.hpp"

namespace vchain {

// Standard observable channels of a density-matrix trajectory: all level
// occupations plus Re/Im of the per-site 12, 13, 23 coherences. Channel
// names are stable across runs of the same scheme.
std::vector<std::string> observable_channel_names(const LevelScheme& scheme);
std::vector<double> extract_observables(const Matrix& rho, const LevelScheme& scheme);

// Appends rho_mm, rho_pp, rho_dd channels (drive eigenbasis populations).
// Requires a single-emitter series with retained rho snapshots.
void append_dressed_populations(TimeSeries& series);

struct TransferMetrics {
    std::vector<std::optional<double>> t_half;   // per site, ps
    std::vector<double> final_detuned_occupation; // per site
    double last_site_inversion = 0.0;
};

TransferMetrics transfer_metrics(const TimeSeries& series, const LevelScheme& scheme,
                                 double threshold = 0.5);

struct ChannelDiff {
    double max_abs_diff = 0.0;
    double t_at_max = 0.0;
};

struct CompareResult {
    std::map<std::string, ChannelDiff> per_channel;
    double max_abs_diff = 0.0;
};

// Aligns b onto a's grid (linear interpolation onto the coarser of the two)
// over the overlapping time range and reports per-channel max abs difference.
CompareResult compare_engines(const TimeSeries& a, const TimeSeries& b,
                              const std::vector<std::string>& channels);

} // namespace vchain
