#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vchain/timeseries.hpp"

namespace vchain {

// All writers are atomic: content goes to a sibling temp file which is then
// renamed over the target, so failed runs never leave partial artifacts.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// CSV schema: column 1 is t_ps, then one column per channel; fixed scientific
// formatting with 12 significant digits makes identical runs byte-identical.
void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_timeseries_csv(const std::filesystem::path& path);

std::string format_sig12(double value);

// Simple multi-line SVG chart (time vs channel values) with a legend.
std::string render_svg(const TimeSeries& series, const std::vector<std::string>& channels,
                       const std::string& title);

} // namespace vchain
